// gqfi: metrological-advantage calculator for isotropic two-mode Gaussian
// states. Subcommands evaluate single states, certify the constructive
// advantage strategy, sweep parameters to CSV, cross-check against the
// truncated Fock oracle, and scan two-photon separability.
//
// Exit codes: 0 success, 1 check failed, 2 usage/input error,
// 3 resource/range error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gqfi/advantage.hpp"
#include "gqfi/fock_oracle.hpp"
#include "gqfi/gaussian_state.hpp"
#include "gqfi/plo.hpp"
#include "gqfi/qfi.hpp"
#include "gqfi/separability.hpp"
#include "gqfi/version.hpp"

namespace {

using namespace gqfi;

// 12 significant digits, locale-independent: reproducible output bytes.
std::string fmt12(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// Flat ordered record, printable as key: value lines or as JSON.
class Record {
 public:
  void add(const std::string& key, double v) { rows_.push_back({key, fmt12(v), true}); }
  void add(const std::string& key, const std::string& v) { rows_.push_back({key, v, false}); }
  void add(const std::string& key, bool v) { rows_.push_back({key, v ? "true" : "false", true}); }

  void print(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      os << "{";
      for (size_t i = 0; i < rows_.size(); ++i) {
        os << (i ? "," : "") << "\n  \"" << rows_[i].key << "\": ";
        if (rows_[i].bare)
          os << rows_[i].value;
        else
          os << '"' << rows_[i].value << '"';
      }
      os << "\n}\n";
    } else {
      for (const auto& r : rows_) os << r.key << ": " << r.value << "\n";
    }
  }

 private:
  struct Row {
    std::string key, value;
    bool bare;  // emitted without quotes in JSON
  };
  std::vector<Row> rows_;
};

struct StateFlags {
  double nu = 1.0, gamma = 0.0, alpha = 0.0;
  double phi_d1 = 0.0, phi_d2 = 0.0, phi1 = 0.0, phi2 = 0.0;
  double theta = 0.0, psi = 0.0;
  double r1 = 0.0, r2 = 0.0;
  double r1_db = 0.0, r2_db = 0.0;
  double phi_tilde = 0.0;
  std::string family = "general";
  std::string one_mode_form = "squared";
};

struct SweepFlags {
  std::string vary = "gamma";
  double start = 0.0, stop = 1.0;
  int points = 2;
  std::string scale = "linear";
  std::string out;
};

struct SepFlags {
  double beta_abs = 0.0, beta_phase = 0.0, theta = 0.0;
  double beta2_abs = 0.0, beta2_phase = 0.0, theta2 = 0.0;
  bool grid = false;
  std::string out;
};

// Everything the parser binds to, rebuildable for the config second pass.
struct AppState {
  CLI::App app{"Gaussian phase-estimation advantage toolkit"};
  std::string format = "text";
  std::string config_path;

  StateFlags ef, cf, of, wf;
  bool eval_with_oracle = false;
  std::string eval_cutoff = "auto";
  std::string oracle_cutoff = "auto";
  SweepFlags sw;
  SepFlags sf;

  CLI::App* eval = nullptr;
  CLI::App* certify = nullptr;
  CLI::App* oracle = nullptr;
  CLI::App* sweep = nullptr;
  CLI::App* sep = nullptr;
  CLI::Option* sep_b2a = nullptr;
  CLI::Option* sep_b2p = nullptr;
  CLI::Option* sep_t2 = nullptr;
};

void add_state_flags(CLI::App* cmd, StateFlags& f, std::string& config_path) {
  cmd->add_option("--nu", f.nu, "symplectic eigenvalue (>= 1)");
  cmd->add_option("--gamma", f.gamma, "displacement magnitude |gamma|");
  cmd->add_option("--alpha", f.alpha, "displacement mode-split angle");
  cmd->add_option("--phi-d1", f.phi_d1, "displacement phase, mode 1");
  cmd->add_option("--phi-d2", f.phi_d2, "displacement phase, mode 2");
  cmd->add_option("--phi1", f.phi1, "phase shift, mode 1");
  cmd->add_option("--phi2", f.phi2, "phase shift, mode 2");
  cmd->add_option("--theta", f.theta, "mode-mixing angle");
  cmd->add_option("--psi", f.psi, "asymmetric phase angle");
  auto* r1 = cmd->add_option("--r1", f.r1, "squeezing rate, mode 1");
  auto* r2 = cmd->add_option("--r2", f.r2, "squeezing rate, mode 2");
  cmd->add_option("--r1-db", f.r1_db, "squeezing, mode 1, in dB")->excludes(r1);
  cmd->add_option("--r2-db", f.r2_db, "squeezing, mode 2, in dB")->excludes(r2);
  cmd->add_option("--phi-tilde", f.phi_tilde,
                  "squeezing-displacement orientation (appendix_d / one_mode families)");
  cmd->add_option("--family", f.family, "state family")
      ->check(CLI::IsMember({"general", "appendix_d", "one_mode"}));
  cmd->add_option("--one-mode-form", f.one_mode_form, "one-mode QFI reading")
      ->check(CLI::IsMember({"squared", "printed"}));
  cmd->add_option("--config", config_path, "flat key=value file with these keys");
}

std::unique_ptr<AppState> make_app() {
  auto st = std::make_unique<AppState>();
  st->app.require_subcommand(1);
  st->app.add_option("--format", st->format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  st->eval = st->app.add_subcommand("eval", "evaluate one state");
  add_state_flags(st->eval, st->ef, st->config_path);
  st->eval->add_flag("--with-oracle", st->eval_with_oracle, "append Fock-oracle values");
  st->eval->add_option("--cutoff", st->eval_cutoff, "oracle cutoff: auto or an integer");

  st->certify = st->app.add_subcommand("certify", "constructive advantage certificate");
  add_state_flags(st->certify, st->cf, st->config_path);

  st->oracle = st->app.add_subcommand("oracle", "closed form vs Fock oracle");
  add_state_flags(st->oracle, st->of, st->config_path);
  st->oracle->add_option("--cutoff", st->oracle_cutoff, "oracle cutoff: auto or an integer");

  st->sweep = st->app.add_subcommand("sweep", "parameter sweep to CSV");
  add_state_flags(st->sweep, st->wf, st->config_path);
  st->sweep->add_option("--vary", st->sw.vary, "swept parameter")
      ->check(CLI::IsMember({"gamma", "r_db", "nu"}));
  st->sweep->add_option("--start", st->sw.start, "first value")->required();
  st->sweep->add_option("--stop", st->sw.stop, "last value")->required();
  st->sweep->add_option("--points", st->sw.points, "number of points")->required();
  st->sweep->add_option("--scale", st->sw.scale, "grid scale")
      ->check(CLI::IsMember({"linear", "log"}));
  st->sweep->add_option("--out", st->sw.out, "output CSV path")->required();

  st->sep = st->app.add_subcommand("separability", "two-photon PPT check");
  st->sep->add_option("--beta-abs", st->sf.beta_abs, "|beta|");
  st->sep->add_option("--beta-phase", st->sf.beta_phase, "arg(beta)");
  st->sep->add_option("--theta", st->sf.theta, "thermal weight theta in [0,1)");
  st->sep_b2a = st->sep->add_option("--beta2-abs", st->sf.beta2_abs,
                                    "|beta_2| (asymmetric case)");
  st->sep_b2p = st->sep->add_option("--beta2-phase", st->sf.beta2_phase, "arg(beta_2)");
  st->sep_t2 = st->sep->add_option("--theta2", st->sf.theta2, "theta_2 (asymmetric case)");
  st->sep->add_flag("--grid", st->sf.grid, "run the symmetric grid scan");
  st->sep->add_option("--out", st->sf.out, "CSV path for --grid");
  st->sep->add_option("--config", st->config_path, "flat key=value file with these keys");
  return st;
}

// Reads a flat key=value file into --key=value tokens, skipping keys the
// command line already supplies (flags override the file).
bool config_tokens(const std::string& path, const CLI::App* sub,
                   std::vector<std::string>& tokens) {
  std::ifstream file(path);
  if (!file) {
    std::cerr << "error: cannot read config file: " << path << "\n";
    return false;
  }
  std::string line;
  while (std::getline(file, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: malformed config line: " << line << "\n";
      return false;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      std::cerr << "error: unknown config key: " << key << "\n";
      return false;
    }
    if (opt->count() > 0) continue;
    // keep the dB/rate exclusivity intact when the command line picks a form
    auto given = [&](const char* name) {
      const CLI::Option* o = sub->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if ((key == "r1" && given("--r1-db")) || (key == "r1-db" && given("--r1")) ||
        (key == "r2" && given("--r2-db")) || (key == "r2-db" && given("--r2")))
      continue;
    tokens.push_back("--" + key + "=" + value);
  }
  return true;
}

void resolve_db(CLI::App* cmd, StateFlags& f) {
  if (cmd->count("--r1-db")) f.r1 = db_to_r(f.r1_db);
  if (cmd->count("--r2-db")) f.r2 = db_to_r(f.r2_db);
}

IsotropicGaussianParams to_params(const StateFlags& f) {
  if (f.family == "appendix_d") {
    SpecialFamilyParams sp{f.nu, f.gamma, f.r1, f.phi_tilde};
    return embed_special_family(sp);
  }
  IsotropicGaussianParams p;
  p.nu = f.nu;
  p.gamma_abs = f.gamma;
  p.alpha = f.alpha;
  p.phi_d1 = f.phi_d1;
  p.phi_d2 = f.phi_d2;
  p.phi_1 = f.phi1;
  p.phi_2 = f.phi2;
  p.theta = f.theta;
  p.psi = f.psi;
  p.r_1 = f.r1;
  p.r_2 = f.r2;
  return p;
}

void echo_inputs(Record& rec, const StateFlags& f) {
  rec.add("family", f.family);
  rec.add("nu", f.nu);
  rec.add("gamma_abs", f.gamma);
  rec.add("r1", f.r1);
  if (f.family == "general") {
    rec.add("r2", f.r2);
    rec.add("alpha", f.alpha);
    rec.add("phi_d1", f.phi_d1);
    rec.add("phi_d2", f.phi_d2);
    rec.add("phi_1", f.phi1);
    rec.add("phi_2", f.phi2);
    rec.add("theta", f.theta);
    rec.add("psi", f.psi);
  } else {
    rec.add("phi_tilde", f.phi_tilde);
  }
  if (f.family == "one_mode") rec.add("one_mode_form", f.one_mode_form);
}

void add_version_keys(Record& rec) {
  rec.add("version", std::string(kVersion));
  rec.add("db_convention", std::string(kDbConvention));
}

struct PointResult {
  double i_f_opt = 0.0, ftql_v = 0.0;
  std::string tag;
};

PointResult evaluate_point(const StateFlags& f) {
  PointResult res;
  if (f.family == "appendix_d") {
    SpecialFamilyParams sp{f.nu, f.gamma, f.r1, f.phi_tilde};
    const SpecialFamilyOpt opt = special_family_qfi_opt(sp);
    res.i_f_opt = opt.i_f_opt;
    res.ftql_v = ftql(embed_special_family(sp));
    res.tag = std::to_string(opt.regime);
  } else if (f.family == "one_mode") {
    OneModeParams om{f.nu, f.gamma, f.phi_tilde, 0.0, f.r1};
    const auto form = f.one_mode_form == "printed" ? OneModeQfiForm::printed
                                                   : OneModeQfiForm::squared;
    res.i_f_opt = one_mode_qfi(om, form);
    res.ftql_v = one_mode_ftql(om);
    res.tag = "one_mode";
  } else {
    const IsotropicGaussianParams p = to_params(f);
    res.i_f_opt = optimize_qfi(p).i_f_opt;
    res.ftql_v = ftql(p);
    res.tag = to_string(theorem1_strategy(p).case_tag);
  }
  return res;
}

int parse_cutoff(const std::string& arg, const IsotropicGaussianParams& p) {
  if (arg == "auto") return cutoff_search(p, 1e-8);
  int d = 0;
  const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), d);
  if (res.ec != std::errc() || res.ptr != arg.data() + arg.size())
    throw std::invalid_argument("cutoff must be 'auto' or an integer");
  return d;
}

int run_eval(const StateFlags& f, const std::string& format, bool with_oracle,
             const std::string& cutoff_arg) {
  const PointResult res = evaluate_point(f);
  const double gap = res.i_f_opt - res.ftql_v;

  Record rec;
  echo_inputs(rec, f);
  rec.add("i_f_opt", res.i_f_opt);
  rec.add("ftql", res.ftql_v);
  rec.add("gap", gap);
  rec.add("advantage", std::max(gap, 0.0));
  if (res.ftql_v > 0.0) rec.add("relative_advantage", std::max(gap, 0.0) / res.ftql_v);
  rec.add(f.family == "general" ? "case" : "regime", res.tag);

  if (with_oracle) {
    const IsotropicGaussianParams p = to_params(f);
    const int d = parse_cutoff(cutoff_arg, p);
    const FockState fs = fock_build(p, d);
    rec.add("oracle_cutoff", static_cast<double>(d));
    rec.add("oracle_leakage", fs.leakage);
    rec.add("oracle_qfi", fock_qfi_jy(fs));
    rec.add("oracle_mean_photon", fock_mean_photon(fs));
    rec.add("oracle_purity", fock_purity(fs));
  }
  add_version_keys(rec);
  rec.print(std::cout, format);
  return 0;
}

int run_certify(const StateFlags& f, const std::string& format) {
  const IsotropicGaussianParams p = to_params(f);
  const Theorem1Certificate cert = theorem1_strategy(p);

  const double recomputed = qfi_jy(apply_plo(p, cert.chosen_plo)) - ftql(p);
  const bool consistent =
      std::abs(recomputed - cert.achieved_gap) <=
      1e-9 * std::max(1.0, std::abs(cert.achieved_gap)) + 1e-12 * ftql(p);

  Record rec;
  echo_inputs(rec, f);
  rec.add("case", to_string(cert.case_tag));
  rec.add("plo_a", cert.chosen_plo.a);
  rec.add("plo_b", cert.chosen_plo.b);
  rec.add("plo_c", cert.chosen_plo.c);
  if (cert.gamma_threshold) rec.add("gamma_threshold", *cert.gamma_threshold);
  rec.add("achieved_gap", cert.achieved_gap);
  rec.add("ftql_attained_not_surpassed", cert.ftql_attained_not_surpassed);
  rec.add("consistent", consistent);
  add_version_keys(rec);
  rec.print(std::cout, format);
  return consistent ? 0 : 1;
}

int run_oracle(const StateFlags& f, const std::string& format,
               const std::string& cutoff_arg) {
  const IsotropicGaussianParams p = to_params(f);
  const int d = parse_cutoff(cutoff_arg, p);
  const FockState fs = fock_build(p, d);

  const double qfi_closed = qfi_jy(p);
  const double qfi_oracle = fock_qfi_jy(fs);
  const double n_closed = mean_photon_number(p);
  const double n_oracle = fock_mean_photon(fs);
  const double pur_closed = 1.0 / (p.nu * p.nu);
  const double pur_oracle = fock_purity(fs);

  const double qfi_tol = std::max(1e-4, 1e-3 * qfi_closed);
  const bool ok = std::abs(qfi_oracle - qfi_closed) <= qfi_tol &&
                  std::abs(n_oracle - n_closed) <= 1e-5 &&
                  std::abs(pur_oracle - pur_closed) <= 1e-5;

  Record rec;
  echo_inputs(rec, f);
  rec.add("cutoff", static_cast<double>(d));
  rec.add("leakage", fs.leakage);
  rec.add("converged", fs.converged);
  rec.add("qfi_closed", qfi_closed);
  rec.add("qfi_oracle", qfi_oracle);
  rec.add("qfi_abs_dev", std::abs(qfi_oracle - qfi_closed));
  rec.add("mean_photon_closed", n_closed);
  rec.add("mean_photon_oracle", n_oracle);
  rec.add("mean_photon_abs_dev", std::abs(n_oracle - n_closed));
  rec.add("purity_closed", pur_closed);
  rec.add("purity_oracle", pur_oracle);
  rec.add("purity_abs_dev", std::abs(pur_oracle - pur_closed));
  rec.add("within_tolerance", ok);
  add_version_keys(rec);
  rec.print(std::cout, format);
  return ok ? 0 : 1;
}

int run_sweep(const StateFlags& f, const SweepFlags& sw) {
  if (sw.points < 2) {
    std::cerr << "error: --points needs at least 2\n";
    return 2;
  }
  if (!(sw.start < sw.stop)) {
    std::cerr << "error: --start must be below --stop\n";
    return 2;
  }
  if (sw.scale == "log" && !(sw.start > 0.0)) {
    std::cerr << "error: log scale requires --start > 0\n";
    return 2;
  }

  std::ofstream os(sw.out, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot open output file: " << sw.out << "\n";
    return 2;
  }
  os << "# gqfi " << kVersion << "\n";
  os << "# db_convention: " << kDbConvention << "\n";
  os << "varied,value,i_f_opt,ftql,advantage,relative_advantage,regime\n";

  for (int i = 0; i < sw.points; ++i) {
    const double t = static_cast<double>(i) / (sw.points - 1);
    const double value = sw.scale == "log"
                             ? sw.start * std::pow(sw.stop / sw.start, t)
                             : sw.start + (sw.stop - sw.start) * t;
    StateFlags point = f;
    if (sw.vary == "gamma") {
      point.gamma = value;
    } else if (sw.vary == "r_db") {
      point.r1 = db_to_r(value);
    } else {
      point.nu = value;
    }
    const PointResult res = evaluate_point(point);
    const double adv = std::max(res.i_f_opt - res.ftql_v, 0.0);
    os << sw.vary << ',' << fmt12(value) << ',' << fmt12(res.i_f_opt) << ','
       << fmt12(res.ftql_v) << ',' << fmt12(adv) << ','
       << (res.ftql_v > 0.0 ? fmt12(adv / res.ftql_v) : "nan") << ','
       << res.tag << "\n";
  }
  return 0;
}

int run_separability(const AppState& st, const std::string& format) {
  const SepFlags& sf = st.sf;
  if (sf.grid) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!sf.out.empty()) {
      file.open(sf.out, std::ios::binary);
      if (!file) {
        std::cerr << "error: cannot open output file: " << sf.out << "\n";
        return 2;
      }
      os = &file;
    }
    *os << "# gqfi " << kVersion << "\n";
    *os << "# db_convention: " << kDbConvention << "\n";
    *os << "beta_abs,beta_phase,theta,min_eig,isolated_eig,separable\n";
    const double thetas[] = {0.0, 0.3, 0.6, 0.9};
    const double betas[] = {0.0, 0.5, 1.0, 2.0, 5.0};
    const double phases[] = {0.0, kPi / 3.0};
    for (double th : thetas) {
      for (double b : betas) {
        for (double ph : phases) {
          const complexd beta = std::polar(b, ph);
          const auto rep =
              partial_transpose_spectrum(two_photon_coefficients(beta, beta, th, th));
          *os << fmt12(b) << ',' << fmt12(ph) << ',' << fmt12(th) << ','
              << fmt12(rep.eigenvalues[0]) << ','
              << (rep.isolated_eigenvalue ? fmt12(*rep.isolated_eigenvalue) : "nan")
              << ',' << (rep.separable_in_n2 ? "true" : "false") << "\n";
        }
      }
    }
    return 0;
  }

  const complexd b1 = std::polar(sf.beta_abs, sf.beta_phase);
  const complexd b2 =
      std::polar(st.sep_b2a->count() ? sf.beta2_abs : sf.beta_abs,
                 st.sep_b2p->count() ? sf.beta2_phase : sf.beta_phase);
  const double t1 = sf.theta;
  const double t2 = st.sep_t2->count() ? sf.theta2 : sf.theta;
  const auto coeff = two_photon_coefficients(b1, b2, t1, t2);
  const auto rep = partial_transpose_spectrum(coeff);

  Record rec;
  rec.add("beta1_abs", std::abs(b1));
  rec.add("beta1_phase", std::arg(b1));
  rec.add("beta2_abs", std::abs(b2));
  rec.add("beta2_phase", std::arg(b2));
  rec.add("theta1", t1);
  rec.add("theta2", t2);
  for (int i = 0; i < 4; ++i) rec.add("eig" + std::to_string(i), rep.eigenvalues[i]);
  rec.add("min_eig", rep.eigenvalues[0]);
  if (rep.isolated_eigenvalue) rec.add("isolated_eig", *rep.isolated_eigenvalue);
  if (rep.identity_residuals) {
    rec.add("identity_residual_trace", (*rep.identity_residuals)[0]);
    rec.add("identity_residual_pairs", (*rep.identity_residuals)[1]);
    rec.add("identity_residual_product", (*rep.identity_residuals)[2]);
  }
  rec.add("separable", rep.separable_in_n2);
  add_version_keys(rec);
  rec.print(std::cout, format);
  return 0;
}

int dispatch(AppState& st) {
  if (*st.eval) {
    resolve_db(st.eval, st.ef);
    return run_eval(st.ef, st.format, st.eval_with_oracle, st.eval_cutoff);
  }
  if (*st.certify) {
    resolve_db(st.certify, st.cf);
    return run_certify(st.cf, st.format);
  }
  if (*st.oracle) {
    resolve_db(st.oracle, st.of);
    return run_oracle(st.of, st.format, st.oracle_cutoff);
  }
  if (*st.sweep) {
    resolve_db(st.sweep, st.wf);
    return run_sweep(st.wf, st.sw);
  }
  if (*st.sep) {
    return run_separability(st, st.format);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  auto st = make_app();
  try {
    st->app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return st->app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return st->app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (!st->config_path.empty()) {
    // Re-parse with the file's key=value pairs injected right after the
    // subcommand token, so explicit flags keep precedence.
    const std::vector<CLI::App*> parsed = st->app.get_subcommands();
    const std::string subname = parsed.empty() ? "" : parsed.front()->get_name();
    std::vector<std::string> tokens;
    if (!config_tokens(st->config_path, parsed.front(), tokens)) return 2;

    std::vector<std::string> args;
    bool injected = false;
    for (int i = 1; i < argc; ++i) {
      args.emplace_back(argv[i]);
      if (!injected && args.back() == subname) {
        args.insert(args.end(), tokens.begin(), tokens.end());
        injected = true;
      }
    }
    std::reverse(args.begin(), args.end());
    st = make_app();
    try {
      st->app.parse(args);
    } catch (const CLI::ParseError& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }

  try {
    return dispatch(*st);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
