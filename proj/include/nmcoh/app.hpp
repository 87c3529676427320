#pragma once

// Subcommand implementations shared by the CLI and the tests.

#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "nmcoh/config.hpp"
#include "nmcoh/io.hpp"
#include "nmcoh/nonmarkov.hpp"
#include "nmcoh/verify.hpp"

namespace nmcoh::app {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericError = 3 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::Io:
    case ErrorCode::InvalidProfile:
    case ErrorCode::AlphaOutOfRange:
      return kConfigError;
    default:
      return kNumericError;
  }
}

/// Runs `fn`, mapping library errors to exit codes with a diagnostic on `err`.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "nmcoh: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

/// Trajectory table: column t, then one column per measure (and per W when
/// sweeping, suffixed "@W=<value>").
inline io::Table simulate_table(const RunConfig& cfg) {
  const auto grid = config_grid(cfg);
  const auto measures = config_measures(cfg);
  const auto state = config_state(cfg);
  const auto couplings = config_couplings(cfg);
  const bool sweeping = !cfg.numbers("sweep.W").empty();

  io::Table table;
  table.comments.push_back(cfg.stamp());
  table.header.push_back("t");
  std::vector<double> t(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) t[i] = grid.t(i);
  table.columns.push_back(std::move(t));

  // Channel factors are built in order; the measure columns fan out.
  struct Job {
    const ChannelFactors* factors;
    const CoherenceMeasure* measure;
  };
  std::vector<ChannelFactors> factors;
  factors.reserve(couplings.size());
  for (double W : couplings) factors.push_back(channel_factors(config_channel(cfg, W), grid));
  std::vector<Job> jobs;
  for (std::size_t w = 0; w < couplings.size(); ++w)
    for (const auto& m : measures) {
      jobs.push_back({&factors[w], &m});
      table.header.push_back(m.name() + (sweeping ? "@W=" + io::format_number(couplings[w]) : ""));
    }
  std::vector<std::vector<double>> columns(jobs.size());
  nmcoh::detail::parallel_for(jobs.size(), 0, [&](std::size_t j) {
    columns[j] = trajectory(*jobs[j].factors, state, *jobs[j].measure).values;
  });
  for (auto& c : columns) table.columns.push_back(std::move(c));
  return table;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto table = simulate_table(cfg);
    const auto& csv_path = cfg.get("output.csv");
    io::write_file(csv_path, io::to_csv(table));
    out << "wrote " << csv_path << " (" << table.rows() << " rows, " << table.columns.size() - 1 << " series)\n";
    const auto& svg_path = cfg.get("output.svg");
    if (!svg_path.empty()) {
      io::write_file(svg_path, io::render_svg(table));
      out << "wrote " << svg_path << "\n";
    }
    return int{kOk};
  });
}

namespace detail {

inline std::string state_text(const InitialQubitState& s) {
  if (const auto* pd = std::get_if<PdState>(&s))
    return "a=" + io::format_number(pd->a) + " b_abs=" + io::format_number(std::abs(pd->b));
  if (const auto* ad = std::get_if<AdState>(&s))
    return "a=" + io::format_number(ad->a) + " b_abs=" + io::format_number(std::abs(ad->b));
  const auto& ru = std::get<RuState>(s);
  return "r1=" + io::format_number(ru.r1) + " r2=" + io::format_number(ru.r2) + " r3=" + io::format_number(ru.r3);
}

inline io::Table state_table(const NonMarkovReport& rep, const std::string& stamp, const std::string& measure) {
  io::Table t;
  t.comments.push_back(stamp);
  t.comments.push_back(" measure=" + measure);
  const bool ru = !rep.per_state_values.empty() && std::holds_alternative<RuState>(rep.per_state_values.front().state);
  t.header = ru ? std::vector<std::string>{"r1", "r2", "r3", "measure_value"}
                : std::vector<std::string>{"a", "b_abs", "measure_value"};
  t.columns.assign(t.header.size(), {});
  for (const auto& sv : rep.per_state_values) {
    if (const auto* r = std::get_if<RuState>(&sv.state)) {
      t.columns[0].push_back(r->r1);
      t.columns[1].push_back(r->r2);
      t.columns[2].push_back(r->r3);
    } else {
      const auto* pd = std::get_if<PdState>(&sv.state);
      const auto* ad = std::get_if<AdState>(&sv.state);
      t.columns[0].push_back(pd ? pd->a : ad->a);
      t.columns[1].push_back(std::abs(pd ? pd->b : ad->b));
    }
    t.columns.back().push_back(sv.value);
  }
  return t;
}

// "states.csv" -> "states.2.csv" for the third measure of a multi-measure run.
inline std::string indexed_path(const std::string& path, std::size_t index, std::size_t count) {
  if (count <= 1) return path;
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  const std::string tag = "." + std::to_string(index);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

}  // namespace detail

/// key=value report text for the configured channel (channel.W; sweeps are
/// ignored) and every configured measure.
inline std::string measure_report(const RunConfig& cfg, std::vector<io::Table>* tables = nullptr) {
  const auto grid = config_grid(cfg);
  const auto channel = config_channel(cfg, cfg.number("channel.W"));
  const auto measures = config_measures(cfg);
  const auto search = config_search(cfg);
  std::string text = "#" + cfg.stamp() + "\n";
  text += "family=" + to_string(search.family) + "\n";
  text += "grid.dt=" + io::format_number(grid.dt) + "\ngrid.t_max=" + io::format_number(grid.t_max()) + "\n";
  for (const auto& m : measures) {
    const auto rep = nonmarkov_measure(channel, m, search, grid);
    const std::string p = m.name() + ".";
    text += p + "measure_value=" + io::format_number(rep.measure_value) + "\n";
    text += p + "argmax=" + detail::state_text(rep.argmax_state) + "\n";
    text += p + "evaluations=" + std::to_string(rep.evaluations) + "\n";
    text += p + "intervals=" + std::to_string(rep.intervals.size()) + "\n";
    for (std::size_t k = 0; k < rep.intervals.size(); ++k)
      text += p + "interval." + std::to_string(k) + "=" + io::format_number(rep.intervals.intervals[k].t_start) + "," +
              io::format_number(rep.intervals.intervals[k].t_end) + "\n";
    if (tables) tables->push_back(detail::state_table(rep, cfg.stamp(), m.name()));
  }
  return text;
}

inline int cmd_measure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<io::Table> tables;
    const auto text = measure_report(cfg, &tables);
    const auto& report_path = cfg.get("output.report");
    io::write_file(report_path, text);
    out << text;
    const auto& table_path = cfg.get("output.table");
    if (!table_path.empty())
      for (std::size_t i = 0; i < tables.size(); ++i)
        io::write_file(detail::indexed_path(table_path, i, tables.size()), io::to_csv(tables[i]));
    return int{kOk};
  });
}

inline int cmd_verify(const std::string& suite, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    verify::VerifyOptions opt;
    opt.seed = cfg.seed();
    const auto results = verify::run_suite(suite, opt);
    out << verify::format_results(results, opt.seed);
    for (const auto& r : results)
      if (!r.passed) return int{kVerifyFailed};
    return int{kOk};
  });
}

inline int cmd_plot(const std::string& csv_path, const std::string& svg_path, const std::string& title, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    std::string text;
    try {
      text = io::read_file(csv_path);
    } catch (const Error& e) {
      fail(ErrorCode::Config, e.what());
    }
    const auto table = io::parse_csv(text);
    io::write_file(svg_path, io::render_svg(table, title));
    out << "wrote " << svg_path << "\n";
    return int{kOk};
  });
}

}  // namespace nmcoh::app
