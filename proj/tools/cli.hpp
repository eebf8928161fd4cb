#pragma once

// georand command-line front end: generate, pattern, test, figures.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "georand/baselines.hpp"
#include "georand/bitgen.hpp"
#include "georand/error.hpp"
#include "georand/geometry.hpp"
#include "georand/patterns.hpp"
#include "georand/sequence_io.hpp"
#include "georand/stats/autocorrelation.hpp"
#include "georand/stats/battery.hpp"
#include "georand/stats/report.hpp"

namespace georand::cli {

namespace fs = std::filesystem;

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t n_points = 100;
  std::string mode = "delaunay";
  std::string bounds = "0,0,20,20";
  std::string size;
  std::string format = "p1";
  std::vector<std::string> inputs;
  std::string out;
  std::string generator;
  std::size_t bits = 0;
  std::size_t corr_length = 0;
  std::vector<std::string> only;
  std::string curve;
};

namespace detail {

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << data)) {
    throw Error(ErrorCode::io_error, "cannot write " + path.string());
  }
}

inline std::vector<std::uint8_t> read_sequence_file(const fs::path& path) {
  std::istringstream in(read_file(path));
  try {
    return parse_sequence(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

inline std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
  const auto x = text.find('x');
  std::size_t w = 0, h = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    w = std::stoull(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("");
    h = std::stoull(text.substr(x + 1), &used);
    if (used != text.size() - x - 1) throw std::invalid_argument("");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::invalid_argument, "size must be WxH, got '" + text + "'");
  }
  if (w == 0 || h == 0) throw Error(ErrorCode::invalid_argument, "size must be at least 1x1");
  return {w, h};
}

inline std::vector<std::uint64_t> parse_primes(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::invalid_argument, "bad number '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

inline std::vector<std::uint32_t> splitmix_stream(std::uint64_t seed, std::size_t bits) {
  return splitmix_words(seed, (bits + 31) / 32);
}

/// Bits from a generator spec: splitmix | dsequence:P | combined:P1,P2,... |
/// lfsr:DEG | delaunay | voronoi.
inline std::vector<std::uint8_t> generator_bits(const std::string& spec, const RunConfig& cfg,
                                                std::size_t bits, std::ostream& log) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "splitmix") {
    const auto words = splitmix_stream(cfg.seed, bits);
    std::vector<std::uint8_t> out(bits);
    for (std::size_t i = 0; i < bits; ++i) out[i] = (words[i / 32] >> (i % 32)) & 1u;
    return out;
  }
  if (kind == "dsequence") {
    const auto p = parse_primes(arg);
    if (p.size() != 1) throw Error(ErrorCode::invalid_argument, "dsequence needs one prime, e.g. dsequence:13");
    return d_sequence(p[0], bits).bits();
  }
  if (kind == "combined") {
    return combined_d_sequence(parse_primes(arg), bits).bits();
  }
  if (kind == "lfsr") {
    const auto d = parse_primes(arg);
    if (d.size() != 1) throw Error(ErrorCode::invalid_argument, "lfsr needs a degree, e.g. lfsr:16");
    return lfsr_sequence(primitive_lfsr(static_cast<unsigned>(d[0])), bits).bits();
  }
  if (kind == "delaunay" || kind == "voronoi") {
    const auto mode = parse_geometry_mode(kind);
    auto cat = concatenate_sequences(cfg.seed, cfg.n_points, mode, parse_bounds(cfg.bounds), bits);
    log << "generator " << kind << ": seeds " << cat.first_seed << ".." << cat.last_seed
        << ", " << cfg.n_points << " points each\n";
    cat.bits.resize(bits);
    return std::move(cat.bits);
  }
  throw Error(ErrorCode::invalid_argument, "unknown generator '" + spec + "'");
}

inline void print_error(std::ostream& err, const Error& e) {
  err << "error: " << e.what() << '\n';
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline void cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const auto mode = parse_geometry_mode(cfg.mode);
  const Rect bounds = parse_bounds(cfg.bounds);
  const BitSequence seq = generate_sequence(cfg.seed, cfg.n_points, mode, bounds);
  const fs::path path = cfg.out.empty() ? fs::path("sequence.txt") : fs::path(cfg.out);
  std::ostringstream body, meta;
  write_sequence(body, seq);
  write_sidecar(meta, seq.provenance(), bounds);
  detail::write_file(path, body.str());
  detail::write_file(path.string() + ".meta", meta.str());
  out << "seed=" << cfg.seed << " mode=" << cfg.mode << " n=" << cfg.n_points
      << " length=" << seq.size() << " ones=" << seq.ones();
  if (seq.provenance().hull_size) out << " hull_k=" << *seq.provenance().hull_size;
  out << " -> " << path.string() << '\n';
}

inline void cmd_pattern(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.empty()) throw Error(ErrorCode::invalid_argument, "pattern: no --input files");
  const auto [w, h] = detail::parse_size(cfg.size);
  std::vector<std::vector<std::uint8_t>> seqs;
  for (const auto& in : cfg.inputs) seqs.push_back(detail::read_sequence_file(in));
  const Pattern2D pattern = assemble_pattern(std::span<const std::vector<std::uint8_t>>(seqs), w, h);
  PbmVariant variant;
  if (cfg.format == "p1") {
    variant = PbmVariant::ascii;
  } else if (cfg.format == "p4") {
    variant = PbmVariant::binary;
  } else {
    throw Error(ErrorCode::unsupported_format, "format must be p1 or p4, got '" + cfg.format + "'");
  }
  const fs::path path = cfg.out.empty() ? fs::path("pattern.pbm") : fs::path(cfg.out);
  detail::write_file(path, write_pbm(pattern, variant));
  out << "pattern " << w << "x" << h << " from";
  for (const auto& s : seqs) out << ' ' << s.size();
  out << " -> " << path.string() << '\n';
}

/// Returns the number of tests that failed with an error.
inline int cmd_test(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> selected = cfg.only;
  if (selected.empty()) {
    selected.push_back("autocorrelation");
    for (auto t : stats::kDiehardTests) selected.emplace_back(t);
  }
  for (const auto& t : selected) {
    if (t != "autocorrelation" && !stats::is_diehard_test(t)) {
      throw Error(ErrorCode::invalid_argument, "unknown test '" + t + "'");
    }
  }
  if (cfg.inputs.size() > 1) throw Error(ErrorCode::invalid_argument, "test: at most one --input");
  if (cfg.inputs.empty() == cfg.generator.empty()) {
    throw Error(ErrorCode::invalid_argument, "test: give exactly one of --input or --generator");
  }

  std::vector<std::uint8_t> bits;
  std::vector<std::uint8_t> corr_bits;
  if (!cfg.inputs.empty()) {
    bits = detail::read_sequence_file(cfg.inputs[0]);
    corr_bits = bits;
  } else {
    std::size_t need = cfg.bits;
    if (need == 0) {
      for (const auto& t : selected) {
        if (t != "autocorrelation") need = std::max(need, 32 * stats::words_required(t));
      }
    }
    const bool geometric = cfg.generator == "delaunay" || cfg.generator == "voronoi";
    std::size_t corr = cfg.corr_length;
    if (corr == 0 && geometric) {
      corr_bits = generate_sequence(cfg.seed, cfg.n_points, parse_geometry_mode(cfg.generator),
                                    parse_bounds(cfg.bounds))
                      .bits();
    } else if (corr == 0) {
      corr = 1000;
    }
    bits = detail::generator_bits(cfg.generator, cfg, std::max(need, corr), err);
    if (corr_bits.empty()) corr_bits.assign(bits.begin(), bits.begin() + corr);
  }
  if (cfg.corr_length > 0) {
    if (cfg.corr_length > bits.size()) {
      throw Error(ErrorCode::insufficient_data, "test: --corr-length exceeds the sequence length");
    }
    corr_bits.assign(bits.begin(), bits.begin() + cfg.corr_length);
  }
  const auto words = pack_words(bits);

  std::ostringstream report;
  report << "# seed=" << cfg.seed << " bits=" << bits.size() << " words=" << words.size();
  if (!cfg.generator.empty()) report << " generator=" << cfg.generator;
  report << '\n';
  std::vector<stats::TestReport> reports;
  int failures = 0;
  for (const auto& t : selected) {
    try {
      if (t == "autocorrelation") {
        const auto curve = stats::autocorrelation(std::span<const std::uint8_t>(corr_bits));
        report << std::left << std::setw(18) << "autocorrelation" << " k=" << curve.k
               << " max_off_origin=" << std::setprecision(6) << curve.max_off_origin();
        if (curve.k > 1) report << " c1=" << curve.values[1];
        report << '\n';
        if (!cfg.curve.empty()) {
          std::ostringstream c;
          stats::write_curve(c, curve);
          detail::write_file(cfg.curve, c.str());
        }
        continue;
      }
      reports.push_back(stats::run_diehard(t, words));
      report << stats::format_report_line(reports.back()) << '\n';
    } catch (const Error& e) {
      ++failures;
      detail::print_error(err, e);
      report << std::left << std::setw(18) << t << " error: " << e.what() << '\n';
    }
  }
  if (!reports.empty()) {
    report << "\n[values]\n";
    stats::write_key_values(report, reports);
  }
  if (cfg.out.empty()) {
    out << report.str();
  } else {
    detail::write_file(cfg.out, report.str());
    out << report.str();
  }
  return failures;
}

inline void cmd_figures(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = cfg.out.empty() ? fs::path("figures") : fs::path(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::io_error, "cannot create directory " + dir.string());
  }
  const Rect bounds = parse_bounds(cfg.bounds);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& data) {
    detail::write_file(dir / name, data);
    written.push_back(name);
  };

  // Figs 1-2: a 20-point set, its triangulation and Voronoi cells.
  {
    const auto pts = sample_points(cfg.seed, 20, bounds);
    std::ostringstream p, e, c;
    p << std::setprecision(17);
    for (std::size_t i = 0; i < pts.size(); ++i) p << i << ' ' << pts[i].x << ' ' << pts[i].y << '\n';
    const auto tri = delaunay(pts);
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& t : tri.triangles) {
      for (int k = 0; k < 3; ++k) {
        const auto a = t[k], b = t[(k + 1) % 3];
        edges.insert({std::min(a, b), std::max(a, b)});
      }
    }
    for (const auto& [a, b] : edges) e << a << ' ' << b << '\n';
    c << std::setprecision(17);
    const auto cells = voronoi_cells(pts, bounds);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      c << i << ' ' << cells[i].area();
      for (const auto& v : cells[i].vertices) c << ' ' << v.x << ' ' << v.y;
      c << '\n';
    }
    emit("fig1_points.txt", p.str());
    emit("fig1_delaunay_edges.txt", e.str());
    emit("fig2_voronoi_cells.txt", c.str());
  }

  // Fig 3: region counts against n.
  {
    std::ostringstream t;
    t << "n voronoi_cells delaunay_triangles hull_k 2n-k-2\n";
    for (std::size_t n = 10; n <= 200; n += 10) {
      const auto pts = sample_points(cfg.seed, n, bounds);
      const auto tri = delaunay(pts);
      const auto cells = voronoi_cells(pts, bounds);
      const std::size_t k = convex_hull(pts).size();
      t << n << ' ' << cells.size() << ' ' << tri.triangles.size() << ' ' << k << ' '
        << 2 * n - k - 2 << '\n';
    }
    emit("fig3_counts.txt", t.str());
  }

  // Figs 4-5: sequences and their autocorrelation curves.
  for (std::size_t n : {10, 100, 1000, 5000}) {
    const auto seq = generate_sequence(cfg.seed, n, GeometryMode::delaunay, bounds);
    std::ostringstream s, m, c;
    write_sequence(s, seq);
    write_sidecar(m, seq.provenance(), bounds);
    stats::write_curve(c, stats::autocorrelation(seq));
    const std::string stem = "fig4_sequence_n" + std::to_string(n);
    emit(stem + ".txt", s.str());
    emit(stem + ".txt.meta", m.str());
    emit("fig5_autocorrelation_n" + std::to_string(n) + ".txt", c.str());
  }

  // Figs 6-7: bitmaps from concatenated sequences, truncated to size.
  for (auto [w, h] : std::vector<std::pair<std::size_t, std::size_t>>{{128, 64}, {128, 128}, {256, 256}}) {
    auto cat = concatenate_sequences(cfg.seed, 1000, GeometryMode::delaunay, bounds, w * h);
    cat.bits.resize(w * h);
    const Pattern2D pattern(w, h, std::move(cat.bits));
    const std::string stem = "fig6_" + std::to_string(w) + "x" + std::to_string(h);
    emit(stem + ".pbm", write_pbm(pattern, PbmVariant::ascii));
    if (w == 128 && h == 64) {
      std::ostringstream c;
      stats::write_matrix(c, stats::autocorrelation_2d(pattern));
      emit("fig7_autocorrelation_128x64.txt", c.str());
    }
  }

  out << "seed=" << cfg.seed << " wrote " << written.size() << " files to " << dir.string() << '\n';
  for (const auto& name : written) out << "  " << name << '\n';
}

// ---------------------------------------------------------------------------

/// Parses argv and dispatches. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"georand: geometric random bit sequences and their tests"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("generate", "sample points and write a bit sequence");
  gen->add_option("--mode", cfg.mode, "delaunay or voronoi")->capture_default_str();
  gen->add_option("--points", cfg.n_points, "number of points")->capture_default_str();
  gen->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
  gen->add_option("--bounds", cfg.bounds, "x0,y0,x1,y1")->capture_default_str();
  gen->add_option("--out", cfg.out, "sequence file (sidecar gets .meta)");

  auto* pat = app.add_subcommand("pattern", "assemble sequences into a bitmap");
  pat->add_option("--input", cfg.inputs, "sequence files, in order")->required();
  pat->add_option("--size", cfg.size, "WxH")->required();
  pat->add_option("--format", cfg.format, "p1 or p4")->capture_default_str();
  pat->add_option("--out", cfg.out, "bitmap file");

  auto* tst = app.add_subcommand("test", "run autocorrelation and diehard tests");
  tst->add_option("--input", cfg.inputs, "sequence file");
  tst->add_option("--generator", cfg.generator,
                  "splitmix | dsequence:P | combined:P1,P2 | lfsr:DEG | delaunay | voronoi");
  tst->add_option("--seed", cfg.seed, "seed for splitmix and geometric generators")
      ->capture_default_str();
  tst->add_option("--points", cfg.n_points, "points per geometric sequence")->capture_default_str();
  tst->add_option("--mode", cfg.mode, "unused; the generator names the mode");
  tst->add_option("--bounds", cfg.bounds, "x0,y0,x1,y1")->capture_default_str();
  tst->add_option("--bits", cfg.bits, "generated stream length (default: enough for the tests)");
  tst->add_option("--corr-length", cfg.corr_length, "bits used for autocorrelation");
  tst->add_option("--only", cfg.only, "comma-separated tests")->delimiter(',');
  tst->add_option("--out", cfg.out, "report file");
  tst->add_option("--curve", cfg.curve, "autocorrelation curve file (lag value)");

  auto* fig = app.add_subcommand("figures", "write desk-scale figure data");
  fig->add_option("--out", cfg.out, "output directory")->capture_default_str();
  fig->add_option("--seed", cfg.seed, "seed")->capture_default_str();
  fig->add_option("--bounds", cfg.bounds, "x0,y0,x1,y1")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen) {
      cmd_generate(cfg, out);
    } else if (*pat) {
      cmd_pattern(cfg, out);
    } else if (*tst) {
      return cmd_test(cfg, out, err) == 0 ? 0 : 1;
    } else if (*fig) {
      cmd_figures(cfg, out);
    }
  } catch (const Error& e) {
    detail::print_error(err, e);
    return 1;
  }
  return 0;
}

}  // namespace georand::cli
