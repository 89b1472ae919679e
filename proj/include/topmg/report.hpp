#pragma once

#include <string>

#include "topmg/bench.hpp"
#include "topmg/density.hpp"
#include "topmg/mto.hpp"
#include "topmg/solvers.hpp"

namespace topmg {

/// history.csv: one row per outer iteration with compliance, max density
/// change, linear-solve iterations and seconds.
void write_history_csv(const OptimReport& report, const std::string& path);

/// residuals.csv for a single linear solve.
void write_residual_csv(const SolveReport& report, const std::string& path);

/// 8-bit binary PGM (P5) of one phase, pixel = round(255 * alpha), one pixel
/// per element.
void write_phase_pgm(const DensityField& density, int phase, const std::string& path);

/// Binary PPM (P6) mapping the first three material phases to R/G/B and the
/// void phase to white.
void write_composite_ppm(const DensityField& density, const std::string& path);

/// Markdown table in the Iter./Time layout: one row per method, one column
/// pair per mesh.
std::string table_markdown(const BenchMatrix& matrix);
void write_table_md(const BenchMatrix& matrix, const std::string& path);

/// Writes history.csv, per-phase PGMs and the composite PPM under out_dir.
void emit_outputs(const OptimReport& report, const std::string& out_dir, bool images,
                  bool csv);

}  // namespace topmg
