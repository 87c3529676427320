#pragma once

// Flat key=value run configuration with dotted sections, presets and a
// digest used to stamp every output file.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nmcoh/channels.hpp"
#include "nmcoh/coherence.hpp"
#include "nmcoh/error.hpp"
#include "nmcoh/io.hpp"
#include "nmcoh/nonmarkov.hpp"

namespace nmcoh {

class RunConfig {
 public:
  RunConfig() : values_(defaults()) {}

  static const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> d = {
        {"channel.family", "pd"},
        {"channel.profile", "lorentzian"},
        {"channel.W", "14"},
        {"channel.lambda", "1"},
        {"channel.gamma0", "0.5"},
        {"channel.table", ""},
        {"channel.kernel", "exponential"},
        {"channel.kernel_table", ""},
        {"channel.gamma1", "0.5"},
        {"channel.gamma2", "0.5"},
        {"channel.gamma3", "0.5"},
        {"state.a", "auto"},
        {"state.b", "auto"},
        {"state.b_im", "0"},
        {"state.r1", "1"},
        {"state.r2", "0"},
        {"state.r3", "0"},
        {"measures", "skew"},
        {"alphas", ""},
        {"grid.dt", "1e-4"},
        {"grid.t_max", "1"},
        {"sweep.W", ""},
        {"output.csv", "out.csv"},
        {"output.svg", ""},
        {"output.report", "report.txt"},
        {"output.table", "states.csv"},
        {"seed", "20240607"},
        {"witness.threshold", "1e-12"},
        {"search.nx", "21"},
        {"search.ny", "21"},
        {"search.refinement", "3"},
        {"search.full_ball", "false"},
        {"search.threads", "0"},
        {"volterra.richardson", "2"},
    };
    return d;
  }

  /// Names accepted by apply_preset.
  static std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

  void set(const std::string& key, const std::string& value) {
    require(defaults().count(key) > 0, ErrorCode::Config, "unknown config key '" + key + "'");
    values_[key] = value;
  }

  /// "key=value"; whitespace around both sides is ignored.
  void set_assignment(const std::string& text) {
    const auto eq = text.find('=');
    require(eq != std::string::npos, ErrorCode::Config, "expected key=value, got '" + text + "'");
    set(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }

  void load_text(const std::string& text, const std::string& origin = "config") {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      try {
        set_assignment(t);
      } catch (const Error& e) {
        fail(ErrorCode::Config, origin + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }

  void load_file(const std::string& path) {
    std::string text;
    try {
      text = io::read_file(path);
    } catch (const Error& e) {
      fail(ErrorCode::Config, e.what());
    }
    load_text(text, path);
  }

  /// Parameter bundles of the benchmark figures. All use lambda = 1, the
  /// state |+> and dt = 1e-4; W = 14 runs cover t in [0, 1], the rest [0, 5].
  void apply_preset(const std::string& name) {
    set("channel.family", "pd");
    set("channel.profile", "lorentzian");
    set("channel.lambda", "1");
    set("grid.dt", "1e-4");
    set("state.a", "auto");
    set("state.b", "auto");
    if (name == "fig1") {
      set("channel.W", "14");
      set("measures", "tsallis(*),mtsallis(*)");
      set("alphas", "0.2,0.8,1.2,1.8");
      set("grid.t_max", "1");
    } else if (name == "fig2") {
      set("channel.W", "14");
      set("measures", "tsallis(*),mtsallis(*)");
      set("alphas", "0.001,2");
      set("grid.t_max", "1");
    } else if (name == "fig3") {
      set("channel.W", "0.5");
      set("measures", "tsallis(*),mtsallis(*)");
      set("alphas", "0.001,0.2,1.2,2");
      set("grid.t_max", "5");
    } else if (name == "fig4") {
      set("channel.W", "5");
      set("sweep.W", "5,10,15,20");
      set("measures", "tsallis(*),mtsallis(*)");
      set("alphas", "0.2");
      set("grid.t_max", "5");
    } else if (name == "fig5") {
      set("channel.W", "3");
      set("measures", "tsallis(2),mtsallis(2),skew,l1,relent");
      set("alphas", "");
      set("grid.t_max", "5");
    } else {
      fail(ErrorCode::Config, "unknown preset '" + name + "'");
    }
  }

  const std::string& get(const std::string& key) const {
    const auto it = values_.find(key);
    require(it != values_.end(), ErrorCode::Config, "unknown config key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const { return parse_number(get(key), key); }

  long long integer(const std::string& key) const {
    const auto& v = get(key);
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    require(!v.empty() && res.ec == std::errc{} && res.ptr == v.data() + v.size(), ErrorCode::Config,
            key + ": expected an integer, got '" + v + "'");
    return out;
  }

  bool flag(const std::string& key) const {
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(ErrorCode::Config, key + ": expected true/false, got '" + v + "'");
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : list(get(key))) out.push_back(parse_number(item, key));
    return out;
  }

  /// Canonical text: every key except output paths, sorted, one per line.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_)
      if (k.rfind("output.", 0) != 0) out += k + "=" + v + "\n";
    return out;
  }

  /// 64-bit FNV-1a of the canonical text, as 16 hex digits.
  std::string digest() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  std::uint64_t seed() const {
    const auto v = integer("seed");
    require(v >= 0, ErrorCode::Config, "seed must be non-negative");
    return static_cast<std::uint64_t>(v);
  }

  /// The comment line (without '#') stamped into every output.
  std::string stamp() const { return " config_digest=" + digest() + " seed=" + std::to_string(seed()); }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  /// Comma-separated items; commas inside parentheses do not split.
  static std::vector<std::string> list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : text) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        if (!trim(cur).empty()) out.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
  }

 private:
  static double parse_number(const std::string& v, const std::string& key) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    require(!v.empty() && res.ec == std::errc{} && res.ptr == v.data() + v.size() && std::isfinite(out),
            ErrorCode::Config, key + ": expected a number, got '" + v + "'");
    return out;
  }

  std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------- builders

namespace detail {

// Runs `fn`, turning any library error into a Config error tagged with `what`.
template <class Fn>
auto as_config(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    fail(ErrorCode::Config, what + ": " + e.what());
  }
}

inline DecayProfile rate_from_text(const RunConfig& cfg, const std::string& key) {
  const auto& v = cfg.get(key);
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (!v.empty() && res.ec == std::errc{} && res.ptr == v.data() + v.size()) return ConstantRate{x};
  return as_config(key, [&] { return DecayProfile{load_tabulated_csv(v)}; });
}

}  // namespace detail

inline ChannelFamily config_family(const RunConfig& cfg) {
  const auto& f = cfg.get("channel.family");
  if (f == "pd") return ChannelFamily::PD;
  if (f == "ad") return ChannelFamily::AD;
  if (f == "ru") return ChannelFamily::RU;
  fail(ErrorCode::Config, "channel.family must be pd, ad or ru (got '" + f + "')");
}

/// Channel for the given coupling W (the sweep value, or channel.W).
inline ChannelSpec config_channel(const RunConfig& cfg, double W) {
  const double lambda = cfg.number("channel.lambda");
  switch (config_family(cfg)) {
    case ChannelFamily::PD: {
      const auto& kind = cfg.get("channel.profile");
      DecayProfile p;
      if (kind == "lorentzian") p = DephasingLorentzian{W, lambda};
      else if (kind == "constant") p = ConstantRate{cfg.number("channel.gamma0")};
      else if (kind == "table") p = detail::as_config("channel.table", [&] { return DecayProfile{load_tabulated_csv(cfg.get("channel.table"))}; });
      else fail(ErrorCode::Config, "channel.profile must be lorentzian, constant or table");
      detail::as_config("channel", [&] { validate(p); });
      return PhaseDamping{p};
    }
    case ChannelFamily::AD: {
      const auto& kind = cfg.get("channel.kernel");
      AmplitudeDamping ad;
      if (kind == "exponential") {
        ad.kernel = ExponentialKernel::from_coupling(W, lambda);
      } else if (kind == "table") {
        const auto tab = detail::as_config("channel.kernel_table", [&] { return load_tabulated_csv(cfg.get("channel.kernel_table")); });
        ad.kernel = TabulatedKernel{tab.times, tab.values};
      } else {
        fail(ErrorCode::Config, "channel.kernel must be exponential or table");
      }
      ad.solver.richardson_levels = static_cast<int>(cfg.integer("volterra.richardson"));
      require(ad.solver.richardson_levels >= 0 && ad.solver.richardson_levels <= 4, ErrorCode::Config,
              "volterra.richardson must be in [0, 4]");
      detail::as_config("channel", [&] { validate(ad.kernel); });
      return ad;
    }
    case ChannelFamily::RU: {
      RandomUnitary ru;
      ru.rates = {detail::rate_from_text(cfg, "channel.gamma1"), detail::rate_from_text(cfg, "channel.gamma2"),
                  detail::rate_from_text(cfg, "channel.gamma3")};
      for (const auto& r : ru.rates) detail::as_config("channel", [&] { validate(r); });
      return ru;
    }
  }
  fail(ErrorCode::Config, "unknown family");
}

/// The initial state; "auto" entries give |+> of the family.
inline InitialQubitState config_state(const RunConfig& cfg) {
  const auto family = config_family(cfg);
  InitialQubitState s;
  if (family == ChannelFamily::RU) {
    s = RuState{cfg.number("state.r1"), cfg.number("state.r2"), cfg.number("state.r3")};
  } else {
    const bool pd = family == ChannelFamily::PD;
    const double a = cfg.get("state.a") == "auto" ? (pd ? 0.0 : 0.5) : cfg.number("state.a");
    const double b_re = cfg.get("state.b") == "auto" ? (pd ? 1.0 : 0.5) : cfg.number("state.b");
    const cplx b(b_re, cfg.number("state.b_im"));
    if (pd) s = PdState{a, b};
    else s = AdState{a, b};
  }
  detail::as_config("state", [&] { validate(s); });
  return s;
}

/// Measure list; "tsallis(*)" and "mtsallis(*)" expand over `alphas`.
inline std::vector<CoherenceMeasure> config_measures(const RunConfig& cfg) {
  std::vector<CoherenceMeasure> out;
  const auto alphas = cfg.numbers("alphas");
  for (const auto& item : RunConfig::list(cfg.get("measures"))) {
    if (item == "tsallis(*)" || item == "mtsallis(*)") {
      require(!alphas.empty(), ErrorCode::Config, item + " needs a non-empty alphas list");
      for (double a : alphas) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, a);
        out.push_back(parse_measure(item.substr(0, item.find('(')) + "(" + std::string(buf, res.ptr) + ")"));
      }
    } else {
      out.push_back(parse_measure(item));
    }
  }
  require(!out.empty(), ErrorCode::Config, "no measures configured");
  return out;
}

inline TimeGrid config_grid(const RunConfig& cfg) {
  const double dt = cfg.number("grid.dt"), t_max = cfg.number("grid.t_max");
  require(dt > 0.0, ErrorCode::Config, "grid.dt must be positive");
  require(t_max >= 2.0 * dt, ErrorCode::Config, "grid.t_max must cover at least two steps");
  return TimeGrid::from_step(dt, t_max);
}

/// Coupling values to run: sweep.W if given, else channel.W.
inline std::vector<double> config_couplings(const RunConfig& cfg) {
  auto ws = cfg.numbers("sweep.W");
  if (ws.empty()) ws.push_back(cfg.number("channel.W"));
  return ws;
}

inline InitialStateSearch config_search(const RunConfig& cfg) {
  InitialStateSearch s;
  s.family = config_family(cfg);
  const auto nx = cfg.integer("search.nx"), ny = cfg.integer("search.ny"), rounds = cfg.integer("search.refinement");
  require(nx >= 1 && ny >= 1, ErrorCode::Config, "search.nx and search.ny must be >= 1");
  require(rounds >= 0 && rounds <= 20, ErrorCode::Config, "search.refinement must be in [0, 20]");
  s.points_x = static_cast<std::size_t>(nx);
  s.points_y = static_cast<std::size_t>(ny);
  s.refinement = static_cast<int>(rounds);
  s.full_ball = cfg.flag("search.full_ball");
  const auto threads = cfg.integer("search.threads");
  require(threads >= 0, ErrorCode::Config, "search.threads must be >= 0");
  s.threads = static_cast<unsigned>(threads);
  s.increment_threshold = cfg.number("witness.threshold");
  require(s.increment_threshold >= 0.0, ErrorCode::Config, "witness.threshold must be >= 0");
  s.keep_table = true;
  return s;
}

}  // namespace nmcoh
