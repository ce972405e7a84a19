#include "optomech/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "optomech/error.hpp"

namespace optomech {

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mechanics.frequency_hz",
      "mechanics.quality_factor",
      "mechanics.mass_kg",
      "cavity.length_m",
      "cavity.wavelength_m",
      "cavity.kappa1",
      "cavity.kappa2",
      "cavity.detuning",
      "laser.power_w",
      "bath.temperature_k",
      "elastic.indices",
      "elastic.omega_base",
      "elastic.quality_factor",
      "photothermal.chi",
      "photothermal.tau_th",
      "photothermal.kernel",
      "photothermal.kernel_terms",
      "material.young_modulus_pa",
      "material.poisson_ratio",
      "material.density_kg_m3",
      "material.specific_heat_j_kg_k",
      "material.thermal_conductivity_w_m_k",
      "material.thermal_expansion_per_k",
      "material.absorption_efficiency",
      "material.thickness_m",
      "material.area_m2",
      "material.spot_radius_m",
      "model.include_com",
      "model.brownian",
      "sweep.axis",
      "sweep.from",
      "sweep.to",
      "sweep.points",
      "sweep.values",
      "sweep.secondary.axis",
      "sweep.secondary.from",
      "sweep.secondary.to",
      "sweep.secondary.points",
      "sweep.secondary.values",
      "quadrature.rel_tol",
      "quadrature.omega_max",
      "quadrature.max_panels",
      "quadrature.mirror_check",
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_plain_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  Reader(std::string_view text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string_view s = raw;
      if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
      s = trim(s);
      if (s.empty()) continue;
      const auto eq = s.find('=');
      if (eq == std::string_view::npos) fail(line, "", "expected `key = value`");
      const std::string key(trim(s.substr(0, eq)));
      const std::string value(trim(s.substr(eq + 1)));
      if (key.empty()) fail(line, "", "empty key");
      if (!known_keys().contains(key)) fail(line, key, "unknown key");
      if (value.empty()) fail(line, key, "empty value");
      if (entries_.contains(key))
        fail(line, key, "duplicate key (first set on line " +
                            std::to_string(entries_.at(key).line) + ")");
      entries_.emplace(key, Entry{value, line});
    }
  }

  [[noreturn]] void fail(int line, const std::string& key, const std::string& what) const {
    throw ParseError(origin_, line, key, what);
  }
  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    fail(line_of(key), key, what);
  }

  bool has(const std::string& key) const { return entries_.contains(key); }
  bool has_prefix(const std::string& prefix) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& kv) { return kv.first.starts_with(prefix); });
  }
  int line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  const std::string& raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(0, key, "missing required key");
    return it->second.value;
  }

  /// Plain decimal/scientific literal or a ratio `a/b`.
  double number(const std::string& key) const {
    const std::string& v = raw(key);
    double out = 0.0;
    if (const auto slash = v.find('/'); slash != std::string::npos) {
      double num = 0.0, den = 0.0;
      if (!parse_plain_double(std::string_view(v).substr(0, slash), num) ||
          !parse_plain_double(std::string_view(v).substr(slash + 1), den))
        fail(key, "expected a number or a ratio a/b, got `" + v + "`");
      if (den == 0.0) fail(key, "division by zero in `" + v + "`");
      out = num / den;
    } else if (!parse_plain_double(v, out)) {
      fail(key, "expected a number, got `" + v + "`");
    }
    return out;
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  double positive(const std::string& key) const {
    const double x = number(key);
    if (!(x > 0.0)) fail(key, "must be > 0");
    return x;
  }

  double non_negative(const std::string& key) const {
    const double x = number(key);
    if (x < 0.0) fail(key, "must be >= 0");
    return x;
  }

  long integer(const std::string& key) const {
    const std::string& v = raw(key);
    long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
      fail(key, "expected an integer, got `" + v + "`");
    return out;
  }

  bool boolean(const std::string& key) const {
    const std::string& v = raw(key);
    if (v == "true") return true;
    if (v == "false") return false;
    fail(key, "expected true or false, got `" + v + "`");
  }

  /// Comma-separated positive integers; `a..b` expands to an inclusive range.
  std::vector<int> index_list(const std::string& key) const {
    const std::string& v = raw(key);
    std::vector<int> out;
    std::string_view rest = v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      auto parse_int = [&](std::string_view s) {
        int x = 0;
        s = trim(s);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
          fail(key, "expected a positive integer, got `" + std::string(s) + "`");
        if (x < 1) fail(key, "mode indices must be positive integers");
        return x;
      };
      if (const auto dots = item.find(".."); dots != std::string_view::npos) {
        const int lo = parse_int(item.substr(0, dots));
        const int hi = parse_int(item.substr(dots + 2));
        if (hi < lo) fail(key, "empty range `" + std::string(item) + "`");
        for (int x = lo; x <= hi; ++x) out.push_back(x);
      } else {
        out.push_back(parse_int(item));
      }
    }
    if (out.empty()) fail(key, "empty index list");
    return out;
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, Entry> entries_;
};

SweepAxis parse_axis(const Reader& r, const std::string& key) {
  const std::string& v = r.raw(key);
  if (v == "detuning") return SweepAxis::Detuning;
  if (v == "kappa2") return SweepAxis::Kappa2;
  if (v == "power") return SweepAxis::Power;
  if (v == "mode_index") return SweepAxis::ModeIndex;
  r.fail(key, "unknown axis `" + v + "` (expected detuning, kappa2, power or mode_index)");
}

AxisSpec parse_axis_block(const Reader& r, const std::string& prefix) {
  AxisSpec spec;
  spec.axis = parse_axis(r, prefix + "axis");
  if (spec.axis == SweepAxis::ModeIndex) {
    if (r.has(prefix + "values")) {
      for (int n : r.index_list(prefix + "values")) spec.values.push_back(n);
    } else {
      const long lo = r.integer(prefix + "from");
      const long hi = r.integer(prefix + "to");
      if (lo < 1 || hi < lo) r.fail(prefix + "to", "mode_index range must satisfy 1 <= from <= to");
      for (long n = lo; n <= hi; ++n) spec.values.push_back(static_cast<double>(n));
    }
    if (spec.values.size() < 2) r.fail(prefix + "axis", "a sweep needs at least 2 points");
    spec.from = spec.values.front();
    spec.to = spec.values.back();
    spec.points = spec.values.size();
    return spec;
  }
  if (r.has(prefix + "values")) r.fail(prefix + "values", "only mode_index sweeps take explicit values");
  spec.from = r.number(prefix + "from");
  spec.to = r.number(prefix + "to");
  const long points = r.integer(prefix + "points");
  if (points < 2) r.fail(prefix + "points", "must be >= 2");
  spec.points = static_cast<std::size_t>(points);
  if ((spec.axis == SweepAxis::Kappa2 || spec.axis == SweepAxis::Power) &&
      std::min(spec.from, spec.to) < 0.0)
    r.fail(prefix + "from", std::string(axis_name(spec.axis)) + " bounds must be >= 0");
  return spec;
}

ElasticMaterial parse_material(const Reader& r) {
  ElasticMaterial m;
  m.young_modulus = r.positive("material.young_modulus_pa");
  m.poisson_ratio = r.number("material.poisson_ratio");
  if (!(m.poisson_ratio < 0.5)) r.fail("material.poisson_ratio", "poisson_ratio must be < 1/2");
  if (!(m.poisson_ratio > -1.0)) r.fail("material.poisson_ratio", "poisson_ratio must be > -1");
  m.density = r.positive("material.density_kg_m3");
  m.specific_heat = r.positive("material.specific_heat_j_kg_k");
  m.thermal_conductivity = r.positive("material.thermal_conductivity_w_m_k");
  m.thermal_expansion = r.positive("material.thermal_expansion_per_k");
  m.absorption_efficiency = r.non_negative("material.absorption_efficiency");
  if (m.absorption_efficiency > 1.0)
    r.fail("material.absorption_efficiency", "absorption_efficiency must be <= 1");
  m.mirror_thickness = r.positive("material.thickness_m");
  m.mirror_area = r.positive("material.area_m2");
  m.spot_radius = r.positive("material.spot_radius_m");
  return m;
}

}  // namespace

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Detuning: return "detuning";
    case SweepAxis::Kappa2: return "kappa2";
    case SweepAxis::Power: return "power";
    case SweepAxis::ModeIndex: return "mode_index";
  }
  return "?";
}

std::string axis_column(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Detuning: return "detuning[omega_m]";
    case SweepAxis::Kappa2: return "kappa2[omega_m]";
    case SweepAxis::Power: return "power[W]";
    case SweepAxis::ModeIndex: return "mode_index[-]";
  }
  return "?";
}

std::vector<double> AxisSpec::grid() const {
  if (!values.empty()) return values;
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = i + 1 == points ? to : from + (to - from) * t;
  }
  return out;
}

Config parse_config(std::string_view text, const std::string& origin) {
  const Reader r(text, origin);
  Config c;

  auto& p = c.params;
  p.omega_m = kTwoPi * r.positive("mechanics.frequency_hz");
  p.Q_m = r.positive("mechanics.quality_factor");
  p.mass = r.positive("mechanics.mass_kg");
  p.cavity_length = r.positive("cavity.length_m");
  p.laser_wavelength = r.positive("cavity.wavelength_m");
  p.kappa1 = r.positive("cavity.kappa1") * p.omega_m;
  p.kappa2 = r.has("cavity.kappa2") ? r.non_negative("cavity.kappa2") * p.omega_m : 0.0;
  p.bath_temperature = r.positive("bath.temperature_k");
  if (r.has("cavity.detuning")) c.detuning = r.number("cavity.detuning");

  c.elastic_indices = r.index_list("elastic.indices");
  if (r.has("elastic.omega_base")) c.elastic.omega_base = r.positive("elastic.omega_base");
  if (r.has("elastic.quality_factor"))
    c.elastic.quality_factor = r.positive("elastic.quality_factor");
  if (r.has("photothermal.chi")) c.elastic.chi = r.non_negative("photothermal.chi");
  if (r.has("photothermal.tau_th")) c.elastic.tau_th = r.positive("photothermal.tau_th");
  if (r.has_prefix("material.")) c.elastic.material = parse_material(r);

  if (r.has("photothermal.kernel")) {
    const std::string& k = r.raw("photothermal.kernel");
    if (k == "single_pole") c.layout.kernel = KernelModel::SinglePole;
    else if (k == "full_series") c.layout.kernel = KernelModel::FullSeries;
    else r.fail("photothermal.kernel", "expected single_pole or full_series");
  }
  if (r.has("photothermal.kernel_terms")) {
    const long terms = r.integer("photothermal.kernel_terms");
    if (terms < 1) r.fail("photothermal.kernel_terms", "must be >= 1");
    c.layout.kernel_terms = static_cast<int>(terms);
  }
  if (r.has("model.include_com")) c.layout.include_com = r.boolean("model.include_com");
  if (r.has("model.brownian")) {
    const std::string& b = r.raw("model.brownian");
    if (b == "full") c.brownian = BrownianSpectrum::Full;
    else if (b == "frozen") c.brownian = BrownianSpectrum::Frozen;
    else r.fail("model.brownian", "expected full or frozen");
  }

  if (r.has_prefix("sweep.")) {
    SweepSpec sweep;
    sweep.primary = parse_axis_block(r, "sweep.");
    if (r.has_prefix("sweep.secondary.")) {
      sweep.secondary = parse_axis_block(r, "sweep.secondary.");
      if (sweep.secondary->axis == sweep.primary.axis)
        r.fail("sweep.secondary.axis", "secondary axis must differ from the primary axis");
    }
    for (const AxisSpec* a : {&sweep.primary, sweep.secondary ? &*sweep.secondary : nullptr}) {
      if (a && a->axis == SweepAxis::ModeIndex && c.elastic_indices.size() != 1)
        r.fail("elastic.indices", "a mode_index sweep needs exactly one elastic index");
    }
    c.sweep = std::move(sweep);
  }
  auto swept = [&](SweepAxis axis) {
    return c.sweep && (c.sweep->primary.axis == axis ||
                       (c.sweep->secondary && c.sweep->secondary->axis == axis));
  };
  if (!swept(SweepAxis::Detuning) && !c.detuning) r.fail(0, "cavity.detuning", "missing required key");
  // A swept power only needs a placeholder for the dry run below.
  if (r.has("laser.power_w") || !swept(SweepAxis::Power))
    p.laser_power = r.non_negative("laser.power_w");

  if (r.has("quadrature.rel_tol")) {
    c.quadrature.rel_tol = r.number("quadrature.rel_tol");
    if (!(c.quadrature.rel_tol > 0.0 && c.quadrature.rel_tol <= 1e-2))
      r.fail("quadrature.rel_tol", "must lie in (0, 1e-2]");
  }
  if (r.has("quadrature.omega_max")) c.quadrature.omega_max = r.positive("quadrature.omega_max");
  if (r.has("quadrature.max_panels")) {
    const long panels = r.integer("quadrature.max_panels");
    if (panels < 8) r.fail("quadrature.max_panels", "must be >= 8");
    c.quadrature.max_panels = static_cast<std::size_t>(panels);
  }
  if (r.has("quadrature.mirror_check"))
    c.quadrature.mirror_check = r.boolean("quadrature.mirror_check");

  // Cross-field checks (a spectrum source for every elastic quantity, etc.).
  try {
    (void)derive_couplings(c.params, c.elastic, c.elastic_indices, c.layout);
  } catch (const InvalidArgument& e) {
    r.fail(0, "", e.what());
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

}  // namespace optomech
