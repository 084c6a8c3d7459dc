#pragma once

// Verdicts for the multiple-point identity f^* n_r = m_{r+1} + e . m_r,
// row by row, plus the text and tab-separated renderings.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "multipoint/bordism.hpp"

namespace multipoint {

struct HerbertRow {
  int r = 1;
  std::string target;
  int lhs = 0, mu = 0, euler = 0;
  std::string error;  // violation code when the row could not be evaluated

  int rhs() const { return (mu + euler) % 2; }
  std::string verdict() const {
    if (!error.empty()) return "ERROR";
    return lhs == rhs() ? "PASS" : "FAIL";
  }
};

struct HerbertReport {
  std::string scene;
  std::vector<HerbertRow> rows;
  std::size_t double_points = 0;  // points for curves, circles for surfaces
  std::size_t triple_points = 0;
  std::vector<std::string> derivation;
  double seconds = 0;

  bool pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const HerbertRow& r) { return r.verdict() == "PASS"; });
  }
  bool any(const std::string& verdict) const {
    return std::any_of(rows.begin(), rows.end(), [&](const HerbertRow& r) { return r.verdict() == verdict; });
  }
};

namespace detail {

template <class F>
HerbertRow evaluate_row(int r, std::string target, F&& body) {
  HerbertRow row{r, std::move(target), 0, 0, 0, ""};
  try {
    body(row);
  } catch (const Violation& v) {
    row.error = v.code();
  }
  return row;
}

inline std::string bits(const std::vector<int>& b) {
  std::string s;
  for (int x : b) s += static_cast<char>('0' + x);
  return s.empty() ? "-" : s;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// One r = 1 row per component. Throws Violation when f is not in general
/// position: an uncertified scene gets no verdict at all.
inline HerbertReport verify(const ImmersedMulticurve& f, std::string scene) {
  detail::Stopwatch clock;
  require_certified(f);
  HerbertReport rep;
  rep.scene = std::move(scene);
  auto dp = double_points(f);
  rep.double_points = dp.points.size();
  for (std::size_t k = 0; k < dp.points.size(); ++k) {
    const auto& [a, b] = dp.ordered_preimages[2 * k];
    rep.derivation.push_back("double point " + to_string(dp.points[k]) + " preimages " + to_string(a) + " " +
                             to_string(b));
  }
  for (int c = 0; c < static_cast<int>(f.size()); ++c) {
    const std::string& id = f.ids()[c];
    rep.rows.push_back(detail::evaluate_row(1, id, [&](HerbertRow& row) {
      auto e = herbert_r1(f, c);
      row.lhs = e.lhs;
      row.mu = e.mu;
      row.euler = e.euler;
      rep.derivation.push_back("component " + id + ": " + std::to_string(e.mu_count) +
                               " double-point preimages, normal flips " + detail::bits(f.normal_transport(c)));
    }));
  }
  rep.seconds = clock.seconds();
  return rep;
}

/// The r = 2 row on [M] (and on each [M_i] when M is disconnected), then an
/// r = 1 row per cycle.
inline HerbertReport verify(const TriangulatedImmersion3& f, const std::vector<MeshCycle>& cycles, std::string scene) {
  detail::Stopwatch clock;
  const auto an = certified_analysis(f);
  HerbertReport rep;
  rep.scene = std::move(scene);
  const auto dc = double_curves(f, an);
  const auto tp = triple_points(f, an);
  rep.double_points = dc.circles.size();
  rep.triple_points = tp.points.size();
  for (std::size_t k = 0; k < dc.circles.size(); ++k) {
    std::string line = "double circle " + std::to_string(k) + ": " + std::to_string(dc.circles[k].segments.size()) +
                       " segments from " + to_string(dc.circles[k].segments.front().a) + ", preimages";
    for (int p : dc.circles[k].preimages)
      line += " [" + std::to_string(dc.preimages[p].pieces.size()) + " pieces, w1 " +
              std::to_string(dc.preimages[p].w1) + (dc.preimages[p].double_cover ? ", double cover" : "") + "]";
    rep.derivation.push_back(line);
  }
  for (std::size_t k = 0; k < tp.points.size(); ++k) {
    std::string line = "triple point " + to_string(tp.points[k]) + " sheets";
    for (int j = 0; j < 3; ++j) line += " " + to_string(tp.mu3_points[3 * k + j].first);
    rep.derivation.push_back(line);
  }
  auto r2_row = [&](int component, const std::string& target) {
    rep.rows.push_back(detail::evaluate_row(2, target, [&](HerbertRow& row) {
      auto e = herbert_r2_on(f, dc, tp, component);
      row.lhs = e.lhs;
      row.mu = e.mu;
      row.euler = e.euler;
      rep.derivation.push_back(target + ": double curves against f" + target + " moved by " + to_string(e.translate));
    }));
  };
  r2_row(-1, "[" + f.name() + "]");
  if (f.component_count() > 1)
    for (int c = 0; c < f.component_count(); ++c) r2_row(c, "[" + f.ids()[c] + "]");
  for (const auto& cycle : cycles)
    rep.rows.push_back(detail::evaluate_row(1, cycle.name, [&](HerbertRow& row) {
      auto e = herbert_r1_on_cycle(f, cycle, dc);
      row.lhs = e.lhs;
      row.mu = e.mu;
      row.euler = e.euler;
    }));
  rep.seconds = clock.seconds();
  return rep;
}

inline HerbertReport verify(const RepresentedClass& scene_class, const std::vector<MeshCycle>& cycles, std::string scene) {
  if (scene_class.holds<ImmersedMulticurve>()) return verify(scene_class.as<ImmersedMulticurve>(), std::move(scene));
  if (scene_class.holds<TriangulatedImmersion3>())
    return verify(scene_class.as<TriangulatedImmersion3>(), cycles, std::move(scene));
  if (scene_class.empty()) return HerbertReport{std::move(scene), {}, 0, 0, {}, 0};
  throw Violation("unsupported", "verify needs a curve or surface immersion");
}

// ---------------------------------------------------------------------------
// Rendering

inline constexpr const char* kTsvHeader = "scene\tr\ttarget\tlhs\tmu\teuler\tverdict";

/// Machine rows without the header. Timing is left out so repeated runs are
/// byte-identical.
inline std::string to_tsv(const HerbertReport& rep) {
  std::ostringstream out;
  for (const auto& row : rep.rows)
    out << rep.scene << '\t' << row.r << '\t' << row.target << '\t' << row.lhs << '\t' << row.mu << '\t' << row.euler
        << '\t' << row.verdict() << (row.error.empty() ? "" : ":" + row.error) << '\n';
  return out.str();
}

inline std::string row_line(const HerbertRow& row) {
  std::ostringstream out;
  out << "r=" << row.r << ' ' << row.target << ": ";
  if (!row.error.empty()) out << "not evaluated (" << row.error << ")";
  else out << row.lhs << " = " << row.mu << " + " << row.euler;
  out << "  " << row.verdict();
  return out.str();
}

inline std::string to_text(const HerbertReport& rep, bool timing = true) {
  std::ostringstream out;
  out << "scene " << rep.scene << ": " << (rep.pass() ? "PASS" : rep.any("FAIL") ? "FAIL" : "ERROR") << '\n';
  for (const auto& row : rep.rows) out << "  " << row_line(row) << '\n';
  out << "  double " << rep.double_points << ", triple " << rep.triple_points << '\n';
  if (timing) out << "  time " << rep.seconds << "s\n";
  return out.str();
}

/// The derivation behind each bit, with mismatched rows called out.
inline std::string explain(const HerbertReport& rep) {
  std::ostringstream out;
  out << "scene " << rep.scene << '\n';
  if (rep.derivation.empty() && rep.double_points == 0 && rep.triple_points == 0) out << "  no intersections\n";
  for (const auto& line : rep.derivation) out << "  " << line << '\n';
  for (const auto& row : rep.rows) {
    out << (row.verdict() == "PASS" ? "  " : "! ") << row_line(row);
    if (row.verdict() == "FAIL") out << "  <- lhs " << row.lhs << " but mu + e gives " << row.rhs();
    out << '\n';
  }
  return out.str();
}

/// Writes the scene text and the failing report next to each other so the
/// run can be replayed. Returns the file written.
inline std::filesystem::path write_reproducer(const HerbertReport& rep, const std::string& scene_text,
                                              const std::filesystem::path& dir) {
  std::string stem = rep.scene;
  for (char& c : stem)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  auto path = dir / (stem + ".repro.scene");
  std::ofstream file(path);
  std::istringstream report(explain(rep));
  for (std::string line; std::getline(report, line);) file << "# " << line << '\n';
  file << scene_text;
  return path;
}

}  // namespace multipoint
