#include "biofilm/csv.hpp"

#include "biofilm/config_format.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace biofilm {

std::string csv_header(int species_count) {
  std::string h = "step,t,phi0";
  for (const char* prefix : {"phi_", "psi_", "phibar_"}) {
    for (int i = 1; i <= species_count; ++i) h += "," + std::string(prefix) + std::to_string(i);
  }
  h += ",gamma,nutrient,antibiotic,dissipation,newton_iterations,residual_norm";
  return h;
}

void write_trajectory(const Trajectory& trajectory, long stride, std::ostream& out) {
  if (stride < 1) throw std::invalid_argument("stride must be at least 1");
  if (trajectory.points.empty()) throw std::invalid_argument("trajectory has no points");
  const int n = trajectory.points.front().state.species_count();
  out << csv_header(n) << '\n';
  const std::size_t last = trajectory.points.size() - 1;
  for (std::size_t k = 0; k < trajectory.points.size(); ++k) {
    const TrajectoryPoint& p = trajectory.points[k];
    if (p.step % stride != 0 && k != last) continue;
    const SimState& s = p.state;
    out << p.step << ',' << format_number(s.t) << ',' << format_number(s.phi0);
    for (int i = 0; i < n; ++i) out << ',' << format_number(s.phi(i));
    for (int i = 0; i < n; ++i) out << ',' << format_number(s.psi(i));
    for (int i = 0; i < n; ++i) out << ',' << format_number(s.phi(i) * s.psi(i));
    out << ',' << format_number(s.gamma) << ',' << format_number(p.nutrient) << ','
        << format_number(p.antibiotic) << ',' << format_number(p.diagnostics.dissipation) << ','
        << p.diagnostics.newton_iterations << ',' << format_number(p.diagnostics.residual_norm)
        << '\n';
  }
}

void write_trajectory(const Trajectory& trajectory, long stride, const std::string& path) {
  std::ostringstream buffer;
  write_trajectory(trajectory, stride, buffer);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw OutputError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  }
  file << buffer.str();
  file.flush();
  if (!file) throw OutputError("failed writing '" + path + "': " + std::strerror(errno));
}

}  // namespace biofilm
