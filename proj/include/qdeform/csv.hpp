#pragma once

// Plain CSV output: optional "# key=value" comment lines, a header row, then
// data rows. Numbers are printed with %.15g so outputs are byte-stable.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qdeform/classical_dynamics.hpp"
#include "qdeform/qalgebra.hpp"
#include "qdeform/qrate.hpp"
#include "qdeform/quantum_dynamics.hpp"
#include "qdeform/repgrid.hpp"

namespace qdeform {

std::string format_number(double x);
// "re+imj" / "re-imj", parseable by Python's complex().
std::string format_complex(cplx z);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
};

// Row-major dump of a complex matrix, one matrix row per line.
void write_matrix_csv(std::ostream& os, const Matrix& m);

CsvTable residual_table(const std::vector<ResidualRow>& rows);
CsvTable qplane_table(const std::vector<QPlaneReport>& rows);
CsvTable sweep_table(const std::vector<SweepResult>& rows);
CsvTable trace_table(const EvolutionTrace& trace);

struct SpectrumRow {
  double s = 0.0;
  int level_index = 0;
  double energy = 0.0;
};
CsvTable spectrum_table(const std::vector<SpectrumRow>& rows);

}  // namespace qdeform
