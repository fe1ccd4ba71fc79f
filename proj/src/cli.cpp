#include "rnlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rnlab/bumps.hpp"
#include "rnlab/cache.hpp"
#include "rnlab/central.hpp"
#include "rnlab/errors.hpp"
#include "rnlab/kloosterman.hpp"
#include "rnlab/mollifier.hpp"
#include "rnlab/moments.hpp"
#include "rnlab/nonvanish.hpp"
#include "rnlab/parallel.hpp"

namespace rnlab {

namespace fs = std::filesystem;

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["q"] = qs;
  j["alpha"] = alpha;
  j["k_min"] = k_min;
  j["k_max"] = k_max;
  j["kind"] = kind;
  j["m1"] = m1;
  j["m2"] = m2;
  j["center"] = center;
  j["eta"] = eta;
  j["arc_scale"] = arc_scale;
  j["centers"] = centers;
  j["epsilon"] = epsilon;
  j["beta"] = beta;
  j["bump_start"] = bump_start;
  j["bump_length"] = bump_length;
  j["fourier_terms"] = fourier_terms;
  j["kl_order"] = kl_order;
  j["kl_shift"] = kl_shift;
  j["kl_window"] = kl_window;
  j["bins"] = bins;
  j["afe_X"] = afe_X;
  j["afe_target"] = afe_target;
  j["format"] = format;
  // workers is left out: it never changes a number, and outputs stay byte-identical across it.
  return j.dump();
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
  };
  require(!c.qs.empty(), "at least one modulus q is required");
  for (i64 q : c.qs) {
    require(q >= 5, "q must be >= 5 (q = " + std::to_string(q) + ")");
    if (!is_prime(static_cast<u64>(q))) throw NotPrimeError("q must be prime (q = " + std::to_string(q) + ")");
    require(q <= kDefaultMaxModulus, "q exceeds the supported modulus cap");
  }
  require(c.alpha > 0 && c.alpha < 0.5, "alpha must lie in (0, 1/2)");
  require(c.k_min <= c.k_max, "k range is empty");
  require(c.kind == "first" || c.kind == "second" || c.kind == "mollified-first" || c.kind == "mollified-second",
          "kind must be first|second|mollified-first|mollified-second");
  require(c.m1 >= 1 && c.m2 >= 1, "m1 and m2 must be positive");
  require(c.eta >= 0 && c.eta < 1.0 / 480, "eta must lie in [0, 1/480)");
  require(c.arc_scale > 0, "arc scale C must be positive");
  require(c.centers >= 1, "centers must be >= 1");
  require(c.epsilon > 0, "epsilon must be positive");
  require(c.beta > 0 && c.beta <= 1, "beta must lie in (0, 1]");
  require(c.bump_length > 0 && c.bump_length <= 1, "bump length must lie in (0, 1]");
  require(c.fourier_terms >= 0, "fourier-terms must be >= 0");
  require(c.kl_order >= 1, "Kloosterman order must be >= 1");
  require(c.kl_window >= 0, "Kloosterman window H must be >= 0");
  require(c.bins >= 2, "bins must be >= 2");
  require(c.afe_X > 0, "AFE balance X must be positive");
  require(c.afe_target > 0, "AFE target error must be positive");
  require(c.format == "csv" || c.format == "json", "format must be csv or json");
  require(c.workers >= 1, "workers must be >= 1");
}

namespace {

std::uint64_t smoothing_hash() {
  return fnv1a(SmoothingSpec::standard(0).to_json() + SmoothingSpec::standard(1).to_json());
}

class Emitter {
 public:
  Emitter(const RunConfig& config, std::ostream& out) : config_(config), out_(out) {
    header_.config_json = config.to_json();
    header_.smoothing_hash = smoothing_hash();
  }

  void emit(const std::string& name, i64 q, const Table& table) {
    if (config_.out_dir.empty()) {
      write(out_, table);
      return;
    }
    fs::create_directories(config_.out_dir);
    const fs::path path = fs::path(config_.out_dir) / (name + "_q" + std::to_string(q) + "." + config_.format);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ResourceError("cannot write " + path.string());
    write(file, table);
  }

 private:
  void write(std::ostream& os, const Table& table) {
    if (config_.format == "json") {
      write_json(os, header_, table);
    } else {
      write_csv(os, header_, table);
    }
  }

  const RunConfig& config_;
  std::ostream& out_;
  OutputHeader header_;
};

AfeParams afe_params(const RunConfig& c) {
  AfeParams p;
  p.X = c.afe_X;
  p.target_abs_err = c.afe_target;
  return p;
}

struct Session {
  const RunConfig& config;
  std::ostream& err;

  CharacterGroupPtr group(i64 q) const {
    auto warn = [this](const std::string& msg) { err << "warning: " << msg << '\n'; };
    return std::make_shared<const CharacterGroup>(cached_context(config.cache_dir, q, warn));
  }

  KlTable kl_table(const CharacterGroup& g, int k) const {
    auto warn = [this](const std::string& msg) { err << "warning: " << msg << '\n'; };
    return cached_kl_table(config.cache_dir, g, k, warn);
  }

  CentralFamily family(const CharacterGroupPtr& g) const {
    return CentralFamily::build(g, afe_params(config), config.workers);
  }
};

int cmd_angles(const Session& s, Emitter& emitter) {
  for (i64 q : s.config.qs) {
    const auto g = s.group(q);
    const auto chars = enumerate_even_primitive(g);
    std::vector<CentralRecord> records(chars.size());
    parallel_for(chars.size(), s.config.workers, [&](std::size_t i) {
      const GaussData gauss = gauss_sum_and_angle(chars[i]);
      records[i].a = chars[i].index();
      records[i].eps = gauss.eps;
      records[i].theta = gauss.theta;
    });
    emitter.emit("angles", q, angle_table(records));
  }
  return kExitPass;
}

int cmd_central(const Session& s, Emitter& emitter) {
  for (i64 q : s.config.qs) emitter.emit("central", q, central_table(s.family(s.group(q)).records));
  return kExitPass;
}

int cmd_kloosterman(const Session& s, Emitter& emitter) {
  for (i64 q : s.config.qs) {
    const auto g = s.group(q);
    const KlTable table = s.kl_table(*g, s.config.kl_order);
    Table values;
    values.columns = {"x", "re", "im"};
    for (i64 x = 1; x < q; ++x) {
      values.add_row({std::to_string(x), format_real(table.values[x].real()), format_real(table.values[x].imag())});
    }
    emitter.emit("kloosterman", q, values);

    const int H = s.config.kl_window > 0 ? s.config.kl_window
                                         : static_cast<int>(std::floor(std::sqrt(static_cast<double>(q))));
    const double root = std::sqrt(static_cast<double>(q));
    const auto diag = correlation_diagnostics(*g, table, s.config.kl_shift, H, root, root);
    Table d;
    d.columns = {"q", "k", "c", "H", "V2", "W", "bound_ratio", "V2_log_ratio"};
    d.add_row({std::to_string(q), std::to_string(table.k), std::to_string(s.config.kl_shift), std::to_string(H),
               format_real(diag.V2), format_real(diag.W), format_real(diag.bound_ratio),
               format_real(diag.V2_log_ratio)});
    emitter.emit("kloosterman_diagnostics", q, d);
  }
  return kExitPass;
}

int cmd_mollifier(const Session& s, Emitter& emitter) {
  for (i64 q : s.config.qs) {
    const MollifierSet set = build_mollifier(q, s.config.alpha);
    Table coeffs;
    coeffs.columns = {"m", "x_num", "x_den", "x"};
    for (i64 m = 1; m <= set.M; ++m) {
      const auto& x = set.x[static_cast<std::size_t>(m)];
      coeffs.add_row({std::to_string(m), x.get_num().get_str(), x.get_den().get_str(),
                      format_real(set.x_double[static_cast<std::size_t>(m)])});
    }
    emitter.emit("mollifier", q, coeffs);

    Table check;
    check.columns = {"q", "M", "G_direct", "G_predicted", "residual_ratio", "c", "c_error_bar"};
    const ConstantC c = constant_c();
    for (i64 M : {i64{100}, i64{1000}, i64{10000}}) {
      const GAsymptotic g = g_asymptotic_check(q, M);
      check.add_row({std::to_string(q), std::to_string(M), format_real(g.direct.get_d()), format_real(g.predicted),
                     format_real(g.residual_ratio), format_real(c.value), format_real(c.error_bar)});
    }
    emitter.emit("mollifier_asymptotic", q, check);
  }
  return kExitPass;
}

int cmd_moments(const Session& s, Emitter& emitter) {
  const auto& c = s.config;
  for (i64 q : c.qs) {
    const auto g = s.group(q);
    const CentralFamily family = s.family(g);
    std::vector<MomentReport> reports;
    std::unique_ptr<MollifierSet> set;
    if (c.kind.rfind("mollified", 0) == 0) set = std::make_unique<MollifierSet>(build_mollifier(q, c.alpha));
    for (int k = c.k_min; k <= c.k_max; ++k) {
      if (c.kind == "first") reports.push_back(first_moment(family, c.m1, k, c.workers));
      if (c.kind == "second") reports.push_back(second_moment(family, c.m1, c.m2, k, c.workers));
      if (c.kind == "mollified-first") reports.push_back(mollified_first(family, *set, k, c.workers));
      if (c.kind == "mollified-second") reports.push_back(mollified_second(family, *set, k, c.workers));
    }
    emitter.emit("moments", q, moment_table(reports));
  }
  return kExitPass;
}

int cmd_smoothed(const Session& s, Emitter& emitter) {
  const auto& c = s.config;
  BumpSpec spec;
  spec.beta = c.beta;
  spec.start = c.bump_start;
  spec.length = c.bump_length;
  const AngleWeight weight = AngleWeight::from_bump(spec, c.fourier_terms);
  for (i64 q : c.qs) {
    const CentralFamily family = s.family(s.group(q));
    const MollifierSet set = build_mollifier(q, c.alpha);
    const SmoothedMoments sm = smoothed_moments(family, set, weight, c.workers);
    emitter.emit("smoothed", q, moment_table({sm.first, sm.second}));
  }
  return kExitPass;
}

int cmd_nonvanish(const Session& s, Emitter& emitter) {
  const auto& c = s.config;
  for (i64 q : c.qs) {
    const CentralFamily family = s.family(s.group(q));
    std::vector<NonvanishReport> rows;
    for (int i = 0; i < c.centers; ++i) {
      const double center = std::fmod(c.center + static_cast<double>(i) / c.centers, 1.0);
      const ArcInterval arc = ArcInterval::shrinking(center, c.arc_scale, static_cast<double>(q), c.eta);
      rows.push_back(nonvanishing_count(q, family.records, arc, c.epsilon, c.eta));
    }
    emitter.emit("nonvanish", q, nonvanish_table(rows));
  }
  return kExitPass;
}

int cmd_verify(const Session& s, Emitter& emitter) {
  std::vector<std::string> failures;
  for (i64 q : s.config.qs) emitter.emit("verify", q, verify_table(q, s.config, &failures));
  for (const auto& f : failures) s.err << "FAIL " << f << '\n';
  return failures.empty() ? kExitPass : kExitAssertion;
}

void add_common(CLI::App* sub, RunConfig& c, std::vector<i64>& range) {
  sub->add_option("--q", c.qs, "modulus or comma-separated list of prime moduli")->delimiter(',');
  sub->add_option("--q-range", range, "lo hi: all primes in [lo, hi], thinned by --q-step")->expected(2);
  sub->add_option("--out-dir", c.out_dir, "write one file per modulus here instead of stdout");
  sub->add_option("--format", c.format, "csv or json");
  sub->add_option("--cache-dir", c.cache_dir, "directory for context and Kloosterman table caches");
  sub->add_option("--workers", c.workers, "worker threads");
  sub->add_option("--afe-X", c.afe_X, "balance parameter X of the approximate functional equation");
  sub->add_option("--afe-target", c.afe_target, "absolute truncation target for the AFE sums");
}

}  // namespace

Table verify_table(i64 q, const RunConfig& config, std::vector<std::string>* failures) {
  Table t;
  t.columns = {"q", "check", "value", "tolerance", "pass"};
  auto record = [&](const std::string& name, double value, double tol, bool pass) {
    t.add_row({std::to_string(q), name, format_real(value), format_real(tol), pass ? "1" : "0"});
    if (!pass && failures) failures->push_back("q=" + std::to_string(q) + " " + name);
  };
  auto below = [&](const std::string& name, double value, double tol) { record(name, value, tol, value <= tol); };

  const auto group = make_character_group(q);
  const unsigned workers = config.workers;
  const double qd = static_cast<double>(q);

  double orth = 0;
  for (i64 m = 1; m < std::min<i64>(q, 2000); ++m) {
    const auto r = orthogonality_sum(group, m);
    orth = std::max(orth, std::abs(r.computed - r.predicted));
  }
  below("orthogonality", orth, 1e-9 * qd);

  double fe = 0;
  for (i64 a = 1; a < std::min<i64>(q - 1, 41); ++a) {
    const Character chi(group, a);
    for (double s : {0.3, 0.6}) fe = std::max(fe, completed_lambda_residual(chi, Complex(s, 0)));
  }
  below("functional_equation", fe, 1e-8);

  const CentralFamily family = CentralFamily::build(group, afe_params(config), workers);
  const auto chars = enumerate_even_primitive(group);
  const HurwitzTable hurwitz = make_hurwitz_table(q, Complex(0.5, 0), workers);
  const std::size_t afe_checks = std::min<std::size_t>(chars.size(), 60);
  std::vector<double> afe_diff(afe_checks);
  parallel_for(afe_checks, workers, [&](std::size_t i) {
    afe_diff[i] = std::abs(family.records[i].lval - central_value_hurwitz(chars[i], hurwitz));
  });
  below("afe_vs_hurwitz", afe_diff.empty() ? 0.0 : *std::max_element(afe_diff.begin(), afe_diff.end()), 1e-8);

  const auto& ctx = group->context();
  double kl_point_diff = 0;
  for (int k = 1; k <= 3; ++k) {
    const KlTable table = kl_all(k, *group);
    const bool all = std::pow(qd, k) <= 2e7;
    std::vector<i64> xs;
    if (all) {
      for (i64 x = 1; x < q; ++x) xs.push_back(x);
    } else if (std::pow(qd, k - 1) <= 1e7) {
      xs = {1, 2, q - 1};
    }
    for (i64 x : xs) kl_point_diff = std::max(kl_point_diff, std::abs(table(x) - kl_point(k, x, ctx)));
  }
  below("kl_all_vs_point", kl_point_diff, 1e-9);

  double deligne = 0;
  std::vector<KlTable> tables;
  for (int k = 1; k <= 6; ++k) {
    tables.push_back(kl_all(k, *group));
    deligne = std::max(deligne, tables.back().values.tail(q - 1).cwiseAbs().maxCoeff() / k);
  }
  below("deligne_ratio", deligne, 1 + 1e-9);

  std::mt19937_64 rng(20240601);
  double weil = 0;
  for (int i = 0; i < 200; ++i) {
    const i64 a = 1 + static_cast<i64>(rng() % static_cast<u64>(q - 1));
    const i64 b = 1 + static_cast<i64>(rng() % static_cast<u64>(q - 1));
    weil = std::max(weil, std::abs(classical_kloosterman(a, b, ctx)) / (2 * std::sqrt(qd)));
  }
  below("weil_ratio", weil, 1 + 1e-9);

  const KlFamily kl(group, std::vector<KlTable>(tables.begin(), tables.begin() + 3));
  double twist = 0;
  for (i64 y = 1; y < std::min<i64>(q, 40); ++y) {
    for (int j : {-2, 1, 3}) {
      CompensatedSum<Complex> direct;
      for (std::size_t i = 0; i < family.records.size(); ++i) {
        direct.add(family.chi(i, y) * root_power(family.records[i].eps, j));
      }
      twist = std::max(twist, std::abs(direct.value() - kl.twist(j, y)));
    }
  }
  below("family_twist_exact", twist, 1e-9 * qd);

  const MollifierSet set = build_mollifier(q, config.alpha);
  bool x_bounds = set.x[1] == 1;
  mpq_class inverse_sum = 0;
  for (i64 m = 1; m <= set.M; ++m) {
    const auto& x = set.x[static_cast<std::size_t>(m)];
    if (abs(x) > 1) x_bounds = false;
    inverse_sum += x / m;
  }
  record("mollifier_x1_and_bound", x_bounds ? 1 : 0, 1, x_bounds);
  record("mollifier_inverse_sum_exact", inverse_sum == 1 / set.G ? 1 : 0, 1, inverse_sum == 1 / set.G);

  bool unitary = true;
  for (i64 n = 1; n <= 300; ++n) {
    const mpq_class delta = n == 1 ? 1 : 0;
    if (unitary_convolution({"mu/phi", "mu^2/phi"}, n, q) != delta) unitary = false;
    if (unitary_convolution({"mu*tau/phi", "mu^2/phi", "mu^2/phi"}, n, q) != delta) unitary = false;
  }
  record("unitary_identities", unitary ? 1 : 0, 1, unitary);

  double dual = 0;
  bool dual_ok = true;
  for (int k : {-1, 0, 1}) {
    try {
      for (const auto& r : {mollified_first(family, set, k, workers), mollified_second(family, set, k, workers)}) {
        dual = std::max(dual, std::abs(r.computed - r.alternate) / std::max(std::abs(r.computed), 1.0));
      }
    } catch (const ConsistencyError&) {
      dual_ok = false;
    }
  }
  record("mollified_dual_path", dual, 1e-6, dual_ok && dual <= 1e-6);

  double conj_first = 0;
  double conj_second = 0;
  for (i64 m1 = 1; m1 <= 3; ++m1) {
    for (int k = -2; k <= 2; ++k) {
      const Complex a = first_moment(family, m1, k, workers).computed;
      conj_first = std::max(conj_first, std::abs(a - std::conj(a)));
      for (i64 m2 = 1; m2 <= 3; ++m2) {
        const Complex b = second_moment(family, m1, m2, k, workers).computed;
        const Complex swapped = second_moment(family, m2, m1, -k, workers).computed;
        conj_second = std::max(conj_second, std::abs(std::conj(b) - swapped));
      }
    }
  }
  below("first_moment_conjugation", conj_first, 1e-9 * qd);
  below("second_moment_conjugation", conj_second, 1e-9 * qd);

  const MomentReport d0 = mollified_second(family, set, 0, workers);
  record("mollified_second_k0_real_nonneg", d0.computed.real(), 0,
         d0.computed.real() >= 0 && std::abs(d0.computed.imag()) <= 1e-9);

  const SmoothedMoments one = smoothed_moments(family, set, AngleWeight::constant_one(), workers);
  const bool reduces = one.first.computed == mollified_first(family, set, 0, workers).computed &&
                       one.second.computed == d0.computed;
  record("smoothed_constant_reduces", reduces ? 1 : 0, 1, reduces);

  i64 partition = 0;
  for (int i = 0; i < 4; ++i) {
    partition += nonvanishing_count(q, family.records, ArcInterval{0.25 * i, 0.25}, 1.0).family_in_window;
  }
  record("angle_partition_count", static_cast<double>(partition), static_cast<double>(phi_plus(q)),
         partition == phi_plus(q));
  return t;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config);
  Session session{config, err};
  Emitter emitter(config, out);
  static const std::map<std::string, std::function<int(const Session&, Emitter&)>> commands = {
      {"angles", cmd_angles},       {"central", cmd_central},   {"kloosterman", cmd_kloosterman},
      {"mollifier", cmd_mollifier}, {"moments", cmd_moments},   {"smoothed", cmd_smoothed},
      {"nonvanish", cmd_nonvanish}, {"verify", cmd_verify}};
  const auto it = commands.find(config.command);
  if (it == commands.end()) throw PreconditionError("unknown command " + config.command);
  return it->second(session, emitter);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  config.workers = default_workers();
  std::vector<i64> range;
  i64 step = 1;

  CLI::App app{"Numerical laboratory for root-number restricted moments of Dirichlet L-functions", "rnlab"};
  app.require_subcommand(1);
  const char* names[] = {"angles", "central", "kloosterman", "mollifier", "moments", "smoothed", "nonvanish", "verify"};
  const char* blurbs[] = {"root numbers and angles of the even family",
                          "central values L(1/2, chi) with root numbers",
                          "hyper-Kloosterman table and correlation diagnostics",
                          "mollifier coefficients and the normalizer asymptotic",
                          "weighted and mollified moments over a k range",
                          "smoothed mollified moments against a bump on the angles",
                          "restricted non-vanishing counts over shrinking windows",
                          "property suite"};
  for (std::size_t i = 0; i < std::size(names); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    add_common(sub, config, range);
    sub->add_option("--q-step", step, "keep every n-th prime of --q-range");
    sub->add_option("--alpha", config.alpha, "mollifier length exponent");
    sub->add_option("--k-min", config.k_min);
    sub->add_option("--k-max", config.k_max);
    sub->add_option("--kind", config.kind, "first|second|mollified-first|mollified-second");
    sub->add_option("--m1", config.m1);
    sub->add_option("--m2", config.m2);
    sub->add_option("--center", config.center, "window center on R/Z");
    sub->add_option("--eta", config.eta, "window length exponent: mu = C q^-eta");
    sub->add_option("--C", config.arc_scale, "window length constant");
    sub->add_option("--centers", config.centers, "number of equally spaced window centers");
    sub->add_option("--epsilon", config.epsilon);
    sub->add_option("--beta", config.beta, "bump edge fraction");
    sub->add_option("--bump-start", config.bump_start);
    sub->add_option("--bump-length", config.bump_length);
    sub->add_option("--fourier-terms", config.fourier_terms, "K_max for the Fourier path");
    sub->add_option("--k", config.kl_order, "Kloosterman order");
    sub->add_option("--shift", config.kl_shift, "c in the Kloosterman correlation");
    sub->add_option("--H", config.kl_window, "Kloosterman window (0: floor sqrt q)");
    sub->add_option("--bins", config.bins);
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  config.command = app.get_subcommands().front()->get_name();
  try {
    if (!range.empty()) {
      if (step < 1) throw PreconditionError("q-step must be >= 1");
      const auto primes = primes_in_range(range[0], range[1]);
      for (std::size_t i = 0; i < primes.size(); i += static_cast<std::size_t>(step)) config.qs.push_back(primes[i]);
    }
    return run(config, out, err);
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::runtime_error& e) {
    err << "FAIL " << e.what() << '\n';
    return kExitAssertion;
  }
}

}  // namespace rnlab
