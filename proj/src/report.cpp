#include "topmg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "topmg/errors.hpp"

namespace topmg {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

unsigned char to_byte(double alpha) {
  const long v = std::lround(255.0 * alpha);
  return static_cast<unsigned char>(std::clamp(v, 0L, 255L));
}

}  // namespace

void write_history_csv(const OptimReport& report, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "iteration,compliance,max_change,solver_iterations,seconds\n";
  for (std::size_t i = 0; i < report.compliance_history.size(); ++i) {
    out << (i + 1) << ',' << fmt(report.compliance_history[i]) << ','
        << fmt(report.change_history[i]) << ',' << report.solver_iteration_history[i]
        << ',' << fmt(report.seconds_history[i]) << '\n';
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_residual_csv(const SolveReport& report, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "iteration,relative_residual\n";
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    out << i << ',' << fmt(report.residual_history[i]) << '\n';
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_phase_pgm(const DensityField& density, int phase, const std::string& path) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << density.nx() << ' ' << density.ny() << "\n255\n";
  for (int ey = density.ny() - 1; ey >= 0; --ey) {
    for (int ex = 0; ex < density.nx(); ++ex) {
      const int e = ex * density.ny() + ey;
      const unsigned char b = to_byte(density.at(e, phase));
      out.write(reinterpret_cast<const char*>(&b), 1);
    }
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_composite_ppm(const DensityField& density, const std::string& path) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  out << "P6\n" << density.nx() << ' ' << density.ny() << "\n255\n";
  const int void_phase = density.num_phases() - 1;
  for (int ey = density.ny() - 1; ey >= 0; --ey) {
    for (int ex = 0; ex < density.nx(); ++ex) {
      const int e = ex * density.ny() + ey;
      double rgb[3] = {0.0, 0.0, 0.0};
      for (int i = 0; i < density.num_phases(); ++i) {
        const double a = density.at(e, i);
        if (i == void_phase) {
          rgb[0] += a;
          rgb[1] += a;
          rgb[2] += a;
        } else if (i < 3) {
          rgb[i] += a;
        } else {
          // materials beyond the third render gray
          rgb[0] += a;
          rgb[1] += a;
          rgb[2] += a;
        }
      }
      for (double c : rgb) {
        const unsigned char b = to_byte(std::min(1.0, c));
        out.write(reinterpret_cast<const char*>(&b), 1);
      }
    }
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::string table_markdown(const BenchMatrix& matrix) {
  // meshes become column pairs, labels become rows, both in first-seen order
  std::vector<std::pair<int, int>> meshes;
  std::vector<std::string> labels;
  for (const BenchRow& r : matrix.rows) {
    if (std::find(meshes.begin(), meshes.end(), std::make_pair(r.nx, r.ny)) == meshes.end()) {
      meshes.emplace_back(r.nx, r.ny);
    }
    if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) {
      labels.push_back(r.label);
    }
  }

  std::string s = "| Method |";
  for (const auto& [nx, ny] : meshes) {
    const std::string m = std::to_string(nx) + "x" + std::to_string(ny);
    s += " " + m + " Iter. | " + m + " Time (s) |";
  }
  s += "\n|---|";
  for (std::size_t i = 0; i < meshes.size(); ++i) s += "---|---|";
  s += "\n";

  char buf[40];
  for (const std::string& label : labels) {
    s += "| " + label + " |";
    for (const auto& [nx, ny] : meshes) {
      const BenchRow* cell = nullptr;
      for (const BenchRow& r : matrix.rows) {
        if (r.label == label && r.nx == nx && r.ny == ny) {
          cell = &r;
          break;
        }
      }
      if (!cell) {
        s += " — | — |";
      } else if (!cell->note.empty()) {
        s += " " + cell->note + " | — |";
      } else {
        std::snprintf(buf, sizeof buf, "%.2f", cell->seconds);
        s += " " + std::to_string(cell->iterations) +
             (cell->converged ? "" : " (not converged)") + " | " + buf + " |";
      }
    }
    s += "\n";
  }
  return s;
}

void write_table_md(const BenchMatrix& matrix, const std::string& path) {
  std::ofstream out = open_out(path);
  out << table_markdown(matrix);
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void emit_outputs(const OptimReport& report, const std::string& out_dir, bool images,
                  bool csv) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "'");
  if (csv) {
    write_history_csv(report, out_dir + "/history.csv");
  }
  if (images) {
    for (int i = 0; i < report.density.num_phases(); ++i) {
      write_phase_pgm(report.density, i,
                      out_dir + "/phase_" + std::to_string(i + 1) + ".pgm");
    }
    write_composite_ppm(report.density, out_dir + "/composite.ppm");
  }
}

}  // namespace topmg
