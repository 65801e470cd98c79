#include "qdeform/csv.hpp"

#include <cmath>
#include <cstdio>

namespace qdeform {

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0 into 0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string format_complex(cplx z) {
  const double im = z.imag();
  return format_number(z.real()) + (std::signbit(im) && im != 0.0 ? "-" : "+") +
         format_number(std::abs(im)) + "j";
}

void CsvTable::write(std::ostream& os) const {
  for (const auto& [key, value] : meta) os << "# " << key << '=' << value << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << format_complex(m(r, c));
    os << '\n';
  }
}

CsvTable residual_table(const std::vector<ResidualRow>& rows) {
  CsvTable t;
  t.columns = {"M", "K", "s", "t", "observable", "residual_max"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.M), std::to_string(r.K), format_number(r.s),
                      format_number(r.t), r.observable, format_number(r.residual_max)});
  }
  return t;
}

CsvTable qplane_table(const std::vector<QPlaneReport>& rows) {
  CsvTable t;
  t.columns = {"M", "s", "commensurate", "residual_full", "residual_interior"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.M), format_number(r.s), r.commensurate ? "1" : "0",
                      format_number(r.residual_full), format_number(r.residual_interior)});
  }
  return t;
}

CsvTable sweep_table(const std::vector<SweepResult>& rows) {
  CsvTable t;
  t.columns = {"s", "I_switch", "formula", "rel_error"};
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.s), format_number(r.I_switch),
                      format_number(r.formula_value), format_number(r.rel_error)});
  }
  return t;
}

CsvTable trace_table(const EvolutionTrace& trace) {
  CsvTable t;
  t.columns = {"t", "exp_n", "exp_cos", "exp_sin", "Re(exp_qn)", "Im(exp_qn)", "norm"};
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    t.rows.push_back({format_number(trace.times[i]), format_number(trace.exp_n[i]),
                      format_number(trace.exp_cosphi[i]), format_number(trace.exp_sinphi[i]),
                      format_number(trace.exp_qn[i].real()),
                      format_number(trace.exp_qn[i].imag()), format_number(trace.norm[i])});
  }
  return t;
}

CsvTable spectrum_table(const std::vector<SpectrumRow>& rows) {
  CsvTable t;
  t.columns = {"s", "level_index", "energy"};
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.s), std::to_string(r.level_index), format_number(r.energy)});
  }
  return t;
}

}  // namespace qdeform
