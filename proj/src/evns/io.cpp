#include "evns/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace evns::io {

void ensure_dir(const std::string& path) {
  if (path.empty()) return;
  std::filesystem::create_directories(path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::ofstream open_out(const std::string& path, bool binary = false) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  require(static_cast<bool>(out), "cannot open for writing: " + path);
  return out;
}
}  // namespace

void write_diagnostics_csv(const std::string& path,
                           const solver::Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,W,J,K_Aeps,V,balance_residual,tail_R2\n";
  for (const auto& r : traj.diag) {
    out << format_double(r.t) << ',' << format_double(r.w) << ','
        << format_double(r.j) << ',' << format_double(r.k_a_eps) << ','
        << format_double(r.v) << ',' << format_double(r.balance_residual)
        << ',' << format_double(r.tail_r2) << '\n';
  }
}

void write_hm_csv(const std::string& path, const solver::Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,m,Hm_norm,Vm\n";
  for (const auto& r : traj.hm) {
    out << format_double(r.t) << ',' << r.m << ',' << format_double(r.hm_norm)
        << ',' << format_double(r.vm) << '\n';
  }
}

void write_grid_function_csv(const std::string& path,
                             const volterra::GridFunction& f) {
  std::ofstream out = open_out(path);
  out << "t,f\n";
  for (std::size_t i = 0; i < f.values.size(); ++i)
    out << format_double(f.time(i)) << ',' << format_double(f.values[i])
        << '\n';
}

void write_scan_csv(const std::string& path,
                    const std::vector<std::array<double, 3>>& rows) {
  std::ofstream out = open_out(path);
  out << "m,y,normalized_value\n";
  for (const auto& r : rows)
    out << format_double(r[0]) << ',' << format_double(r[1]) << ','
        << format_double(r[2]) << '\n';
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
}

template <int N>
void write_field(const std::string& path, const spectral::FieldN<N>& f) {
  std::ofstream out = open_out(path, true);
  const auto n = static_cast<std::uint32_t>(f.grid->n());
  const double box = f.grid->box();
  const auto comps = static_cast<std::uint32_t>(N);
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&box), sizeof(box));
  out.write(reinterpret_cast<const char*>(&comps), sizeof(comps));
  for (int c = 0; c < N; ++c) {
    out.write(reinterpret_cast<const char*>(f.c[c].data()),
              static_cast<std::streamsize>(sizeof(double) * f.c[c].size()));
  }
}

template <int N>
spectral::FieldN<N> read_field(const std::string& path,
                               std::shared_ptr<const spectral::Grid3> grid) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open field file: " + path);
  std::uint32_t n = 0, comps = 0;
  double box = 0.0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&box), sizeof(box));
  in.read(reinterpret_cast<char*>(&comps), sizeof(comps));
  require(n == grid->n() && comps == N, "field header mismatch: " + path);
  require(std::abs(box - grid->box()) < 1e-12, "field box mismatch: " + path);
  spectral::FieldN<N> f(grid);
  for (int c = 0; c < N; ++c) {
    in.read(reinterpret_cast<char*>(f.c[c].data()),
            static_cast<std::streamsize>(sizeof(double) * f.c[c].size()));
  }
  require(static_cast<bool>(in), "truncated field file: " + path);
  return f;
}

template void write_field<1>(const std::string&, const spectral::FieldN<1>&);
template void write_field<3>(const std::string&, const spectral::FieldN<3>&);
template spectral::FieldN<1> read_field<1>(
    const std::string&, std::shared_ptr<const spectral::Grid3>);
template spectral::FieldN<3> read_field<3>(
    const std::string&, std::shared_ptr<const spectral::Grid3>);

}  // namespace evns::io
