#pragma once

// Command-line front end. run() never calls exit(); it returns
//   0 on success, 1 when `verify` finds a failing check, 2 on usage errors.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momentlab/experiments.hpp"
#include "momentlab/fixtures.hpp"
#include "momentlab/identities.hpp"
#include "momentlab/io.hpp"
#include "momentlab/parallel.hpp"

namespace momentlab::cli {

struct Options {
  int threads = 0;
  bool deterministic = false;

  std::int64_t q = 0;
  std::string q_list = "101,211,401,809";
  std::string omega1 = "0";
  std::string omega2 = "0";
  std::int64_t ell = 1;
  int parity = 0;
  std::string out;
  std::uint64_t seed = 7;
  bool cusp = false;
  std::string experiment = "cubic";
  std::string kernel = "kl3";
  std::string coeff = "tau";
  std::string omega = "0";
  double threshold_M = 0.0;
  std::string mode = "exhaustive";
  int rank = 2;
  std::string twists;
  std::int64_t chi = 1;
  std::string suite = "derived";
};

inline const std::vector<std::string> kScanHeader = {"q",  "ell",       "omega1_idx", "omega2_idx", "re",
                                                     "im", "main_term", "defect",     "seconds"};

/// Output stream for --out, or the fallback when no path was given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

inline std::vector<std::string> scan_fields(const ScanRow& r, bool deterministic) {
  return {std::to_string(r.q),
          std::to_string(r.ell),
          std::to_string(r.omega1),
          std::to_string(r.omega2),
          format_double(r.value.real()),
          format_double(r.value.imag()),
          std::to_string(r.main_term),
          format_double(r.defect),
          format_double(deterministic ? 0.0 : r.seconds)};
}

/// Options that were actually supplied, subcommand chain first.
inline RunConfig collect_config(const CLI::App& app) {
  RunConfig cfg;
  const CLI::App* cur = &app;
  auto add_options = [](const CLI::App* a, RunConfig::Options& dst) {
    for (const auto* opt : a->get_options()) {
      if (opt->count() == 0 || opt->get_lnames().empty()) continue;
      const auto& name = opt->get_lnames().front();
      if (name == "help" || name == "config") continue;
      std::string value;
      if (opt->get_expected_min() > 0) value = opt->as<std::string>();
      dst.emplace_back(name, value);
    }
  };
  add_options(cur, cfg.global);
  while (true) {
    const auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    cfg.command.push_back(cur->get_name());
    add_options(cur, cfg.options);
  }
  return cfg;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  bool ok = true;
  for (const auto& c : identity_suite(o.q, o.seed)) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.value) << " (tol "
        << format_double(c.tolerance) << ")\n";
    ok = ok && c.pass;
  }
  return ok ? 0 : 1;
}

inline int cmd_moment_dirichlet(const Options& o, std::ostream& out) {
  const auto t1 = resolve_character_index(o.omega1, o.q);
  const auto t2 = resolve_character_index(o.omega2, o.q);
  const auto row = scan_cubic(o.q, o.ell, t1, t2);
  Sink sink(o.out, out);
  CsvWriter csv(sink.get(), kScanHeader);
  csv.row(scan_fields(row, o.deterministic));
  return 0;
}

inline int cmd_moment_cusp(const Options& o, std::ostream& out, std::ostream& err) {
  Stopwatch sw;
  MomentContext mc(o.q, true);
  const auto r = cubic_moment_cusp(mc, o.ell);
  if (!r.ell_in_range) err << "warning: ell exceeds q^(3/13)\n";
  Sink sink(o.out, out);
  CsvWriter csv(sink.get(), kScanHeader);
  csv.row(scan_fields({r.q, r.ell, 0, 0, r.value, r.main_term, r.defect, sw.seconds()}, o.deterministic));
  return 0;
}

inline int cmd_cross_check(const Options& o, std::ostream& out) {
  MomentContext mc(o.q);
  const auto t1 = resolve_character_index(o.omega1, o.q);
  const auto t2 = resolve_character_index(o.omega2, o.q);
  const auto r = moment_via_arithmetic(mc, t1, t2, o.ell, o.parity);
  const double diff = std::abs(r.arithmetic - r.direct);
  out << "arithmetic " << format_double(r.arithmetic.real()) << " " << format_double(r.arithmetic.imag()) << "\n"
      << "direct     " << format_double(r.direct.real()) << " " << format_double(r.direct.imag()) << "\n"
      << "difference " << format_double(diff) << " tolerance " << format_double(r.tolerance) << "\n"
      << "main term V(q^-3/2) " << format_double(r.main_isolated) << "\n";
  return diff <= r.tolerance ? 0 : 1;
}

inline int cmd_census(const Options& o, std::ostream& out) {
  MomentContext mc(o.q, o.cusp);
  if (o.cusp) {
    const auto c = census_cusp(mc);
    out << "q " << c.q << " cusp census count " << c.count << " proportion " << format_double(c.proportion) << "\n";
  } else {
    const auto [t1, t2] = seeded_twists(o.q, o.seed);
    const auto c = census(mc, t1, t2);
    out << "q " << c.q << " omega1 " << t1 << " omega2 " << t2 << " count " << c.count << " proportion "
        << format_double(c.proportion) << "\n";
  }
  return 0;
}

inline int cmd_scan(const Options& o, std::ostream& out) {
  const auto qs = parse_int_list(o.q_list);
  Sink sink(o.out, out);
  CsvWriter csv(sink.get(), kScanHeader);
  for (const auto q : qs) {
    ScanRow row;
    if (o.experiment == "cubic") {
      row = scan_cubic(q, o.ell, resolve_character_index(o.omega1, q), resolve_character_index(o.omega2, q));
    } else if (o.experiment == "census") {
      row = scan_census(q, o.seed);
    } else if (o.experiment == "twist-sum") {
      const auto t = twist_sum_experiment(q, o.kernel, o.coeff);
      row = {q, 1, 0, 0, t.result.value, 0, t.result.ratio, t.seconds};
    } else {
      throw CLI::ValidationError("--experiment", "expected cubic, census or twist-sum");
    }
    csv.row(scan_fields(row, o.deterministic));
  }
  return 0;
}

inline ScanMode parse_mode(const std::string& s) {
  if (s == "exhaustive") return ScanMode::full();
  const std::string prefix = "sample:";
  if (s.rfind(prefix, 0) == 0) {
    const auto rest = s.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--mode", "expected sample:<n>:<seed>");
    return ScanMode::sample(std::stoull(rest.substr(0, colon)), std::stoull(rest.substr(colon + 1)));
  }
  throw CLI::ValidationError("--mode", "expected exhaustive or sample:<n>:<seed>");
}

inline int cmd_correlation(const Options& o, std::ostream& out, std::ostream& err) {
  auto ctx = build_context(o.q);
  CharacterGroup g(ctx);
  const auto k = make_kernel(g, o.kernel);
  const auto omega = g.character(resolve_character_index(o.omega, o.q));
  const auto mode = parse_mode(o.mode);
  const double M = o.threshold_M > 0.0 ? o.threshold_M : median_threshold(k, omega);
  const auto scan = correlation_scan(k, omega, M, mode);
  Sink sink(o.out, out);
  CsvWriter csv(sink.get(), {"gamma_a", "gamma_b", "gamma_c", "gamma_d", "abs_corr", "class"});
  for (const auto& r : scan.records) {
    csv.row({std::to_string(r.gamma.a()), std::to_string(r.gamma.b()), std::to_string(r.gamma.c()),
             std::to_string(r.gamma.d()), format_double(std::abs(r.value)), to_string(r.cls.tag)});
  }
  err << "M " << format_double(M) << " visited " << scan.visited << " exceeding " << scan.exceeding
      << " parabolic " << scan.parabolic_exceeding << " outside Bruhat cells " << scan.outside_bruhat_exceeding
      << " point pairs " << scan.point_pairs_needed << " goodness " << (scan.fits_goodness ? "yes" : "no") << "\n";
  for (const auto& [tag, n] : scan.exceeding_histogram) err << "  " << to_string(tag) << " " << n << "\n";
  return 0;
}

inline int cmd_twist_sum(const Options& o, std::ostream& out) {
  std::vector<std::int64_t> qs = o.q > 0 ? std::vector<std::int64_t>{o.q} : parse_int_list(o.q_list);
  Sink sink(o.out, out);
  CsvWriter csv(sink.get(), {"q", "kernel", "coeff", "re", "im", "abs", "ratio", "seconds"});
  for (const auto q : qs) {
    const auto r = twist_sum_experiment(q, o.kernel, o.coeff);
    csv.row({std::to_string(q), r.kernel, r.coeff, format_double(r.result.value.real()),
             format_double(r.result.value.imag()), format_double(std::abs(r.result.value)),
             format_double(r.result.ratio), format_double(o.deterministic ? 0.0 : r.seconds)});
  }
  return 0;
}

inline int cmd_weil_scan(const Options& o, std::ostream& out) {
  auto ctx = build_context(o.q);
  CharacterGroup g(ctx);
  KloostermanSpec spec = KloostermanSpec::untwisted(o.rank);
  if (!o.twists.empty()) spec.twists = parse_int_list(o.twists);
  spec.validate();
  const double m = weil_scan(g, spec);
  out << spec.describe() << " q " << o.q << " max|Kl| " << format_double(m) << " bound " << o.rank << " "
      << (m <= o.rank + 1e-9 ? "ok" : "VIOLATED") << "\n";
  return m <= o.rank + 1e-9 ? 0 : 1;
}

inline int cmd_lvalue(const Options& o, std::ostream& out) {
  auto ctx = build_context(o.q);
  CharacterGroup g(ctx);
  const auto chi = g.character(o.chi);
  if (o.cusp) {
    const auto tau = build_tau(static_cast<std::size_t>(50 * o.q + 2));
    const auto a = CuspTwistAfe(g, tau.lambda, 12, kDefaultDamping).central(chi);
    const auto b = CuspTwistAfe(g, tau.lambda, 12, kAlternateDamping).central(chi);
    out << "L(Delta x chi_" << o.chi << ", 1/2) = " << format_double(a.value.real()) << " "
        << format_double(a.value.imag()) << " terms " << a.terms_used << "\n"
        << "damping cross-check difference " << format_double(std::abs(a.value - b.value)) << "\n";
    return 0;
  }
  const auto a = dirichlet_central(g, chi);
  const auto o2 = hurwitz_oracle(chi, 0.5);
  out << "L(chi_" << o.chi << ", 1/2) = " << format_double(a.value.real()) << " " << format_double(a.value.imag())
      << " terms " << a.terms_used << "\n"
      << "oracle " << format_double(o2.real()) << " " << format_double(o2.imag()) << " difference "
      << format_double(std::abs(a.value - o2)) << "\n";
  return 0;
}

inline int cmd_fixtures(const Options& o, std::ostream& out) {
  if (o.suite != "derived") throw CLI::ValidationError("--suite", "only 'derived' is available");
  const auto j = record_derived_fixtures();
  const std::string path = o.out.empty() ? "tests/fixtures/derived.json" : o.out;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << j.dump(2) << "\n";
  out << "wrote " << path << "\n";
  return 0;
}

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               RunConfig* parsed = nullptr) {
  Options o;
  CLI::App app{"Cubic moments, trace functions and central L-values over prime fields", "momentlab"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file overriding defaults");
  app.add_option("--threads", o.threads, "worker threads (default: MOMENTLAB_THREADS or hardware)");
  app.add_flag("--deterministic", o.deterministic, "write 0 in timing columns");

  auto add_q = [&](CLI::App* s, bool required = true) {
    auto* opt = s->add_option("--q", o.q, "odd prime modulus");
    if (required) opt->required();
  };

  auto* verify = app.add_subcommand("verify", "run exact-identity checks")->require_subcommand(1);
  auto* identities = verify->add_subcommand("identities", "identity suite for one prime");
  add_q(identities);
  identities->add_option("--seed", o.seed);

  auto* moment = app.add_subcommand("moment", "twisted cubic moments")->require_subcommand(1);
  auto* md = moment->add_subcommand("dirichlet", "T3(w1, w2, l; q) as one CSV row");
  add_q(md);
  md->add_option("--omega1", o.omega1, "<t> or random:<seed>");
  md->add_option("--omega2", o.omega2, "<t> or random:<seed>");
  md->add_option("--ell", o.ell);
  md->add_option("--out", o.out);
  auto* mcusp = moment->add_subcommand("cusp", "T3(Delta, l; q) as one CSV row");
  add_q(mcusp);
  mcusp->add_option("--ell", o.ell);
  mcusp->add_option("--out", o.out);
  auto* mcross = moment->add_subcommand("cross-check", "arithmetic side vs direct parity-class average");
  add_q(mcross);
  mcross->add_option("--omega1", o.omega1);
  mcross->add_option("--omega2", o.omega2);
  mcross->add_option("--ell", o.ell);
  mcross->add_option("--parity", o.parity)->check(CLI::Range(0, 1));

  auto* cen = app.add_subcommand("census", "simultaneous non-vanishing census");
  add_q(cen);
  cen->add_flag("--cusp", o.cusp);
  cen->add_option("--seed", o.seed);

  auto* scan = app.add_subcommand("scan", "one CSV row per prime");
  scan->add_option("--q-list", o.q_list);
  scan->add_option("--experiment", o.experiment)->check(CLI::IsMember({"cubic", "census", "twist-sum"}));
  scan->add_option("--out", o.out);
  scan->add_option("--ell", o.ell);
  scan->add_option("--omega1", o.omega1);
  scan->add_option("--omega2", o.omega2);
  scan->add_option("--seed", o.seed);
  scan->add_option("--kernel", o.kernel);
  scan->add_option("--coeff", o.coeff);

  auto* corr = app.add_subcommand("correlation", "correlation sums over PGL_2(F_q)")->require_subcommand(1);
  auto* cscan = corr->add_subcommand("scan", "CSV of |C(K, w; gamma)| with classes");
  add_q(cscan);
  cscan->add_option("--kernel", o.kernel);
  cscan->add_option("--omega", o.omega);
  cscan->add_option("--M", o.threshold_M, "threshold (default: twice the median |C|/sqrt q)");
  cscan->add_option("--mode", o.mode, "exhaustive or sample:<n>:<seed>");
  cscan->add_option("--out", o.out);

  auto* tws = app.add_subcommand("twist-sum", "S = sum a(n) K(n) V(n/q)");
  add_q(tws, false);
  tws->add_option("--q-list", o.q_list);
  tws->add_option("--kernel", o.kernel);
  tws->add_option("--coeff", o.coeff, "tau or divisor:<t_idx>:<t>");
  tws->add_option("--out", o.out);

  auto* weil = app.add_subcommand("weil-scan", "max |Kl_k| over F_q^x");
  add_q(weil);
  weil->add_option("--k", o.rank)->check(CLI::Range(1, 8));
  weil->add_option("--twists", o.twists, "comma-separated character indices");

  auto* lval = app.add_subcommand("lvalue", "central value with cross-check");
  add_q(lval);
  lval->add_option("--chi", o.chi);
  lval->add_flag("--cusp", o.cusp);

  auto* fix = app.add_subcommand("fixtures", "oracle fixtures")->require_subcommand(1);
  auto* rec = fix->add_subcommand("record", "recompute and write the fixtures file");
  rec->add_option("--suite", o.suite);
  rec->add_option("--out", o.out);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }
  if (parsed != nullptr) *parsed = collect_config(app);
  if (o.threads > 0) set_thread_count(o.threads);

  try {
    if (verify->parsed()) return cmd_verify(o, out);
    if (md->parsed()) return cmd_moment_dirichlet(o, out);
    if (mcusp->parsed()) return cmd_moment_cusp(o, out, err);
    if (mcross->parsed()) return cmd_cross_check(o, out);
    if (cen->parsed()) return cmd_census(o, out);
    if (scan->parsed()) return cmd_scan(o, out);
    if (cscan->parsed()) return cmd_correlation(o, out, err);
    if (tws->parsed()) {
      if (o.q <= 0 && tws->count("--q-list") == 0) throw CLI::ValidationError("--q", "give --q or --q-list");
      return cmd_twist_sum(o, out);
    }
    if (weil->parsed()) return cmd_weil_scan(o, out);
    if (lval->parsed()) return cmd_lvalue(o, out);
    if (rec->parsed()) return cmd_fixtures(o, out);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 2;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace momentlab::cli
