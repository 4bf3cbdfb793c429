#include "formguard/bounds.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "formguard/errors.hpp"

namespace formguard {

GainSpectra gain_spectra(const ControlGains& gains, const LaplacianBundle& bundle) {
  check_gains_shape(gains, static_cast<int>(bundle.LB.rows()), bundle.state_dim);
  const Mat K = block_diagonal(gains.k);
  GainSpectra s;
  s.sigma_K = K.diagonal().cwiseAbs().maxCoeff();
  s.sigma_G = block_diagonal(gains.observer).diagonal().cwiseAbs().maxCoeff();
  s.sigma_P = max_singular_value(Mat::Identity(K.rows(), K.cols()) - K * bundle.L_bar);
  s.sigma_PtP = s.sigma_P * s.sigma_P;
  s.sigma_Lbar = bundle.sigma_max_Lbar;
  return s;
}

void BoundSet::refresh_sums() {
  mu_M = eps_M + w_M;
  nu_M = F_M + d_M;
}

namespace {

double eta_of(const TuningParams& tuning, double phi_M) {
  const double eta = eta_factor(tuning, phi_M);
  if (std::isnan(eta)) {
    throw ConfigError("learning-rate condition (30) violated: alpha * phi_M^2 >= 1");
  }
  return eta;
}

}  // namespace

FormationBound compute_e_M(double mu_M, double nu_M, double W_M, double phi_M,
                           const TuningParams& tuning, double c, const GainSpectra& sp) {
  const double a = tuning.alpha;
  const double g = tuning.gamma;
  const double eta = eta_of(tuning, phi_M);
  const double q = 1.0 - a * phi_M * phi_M;
  const double sigma_LtL = sp.sigma_Lbar * sp.sigma_Lbar;

  FormationBound r;
  r.denominator = 1.0 - eta * c * c * sp.sigma_PtP;
  if (!(r.denominator > 0.0)) {
    throw ConfigError(fmt::format(
        "control-gain condition (29) violated: 1 - eta c^2 sigma(P'P) = {} is not positive",
        r.denominator));
  }
  r.Lambda1 = c * sp.sigma_P * sp.sigma_Lbar / sigma_LtL *
              ((g + 1.0) / q * mu_M + (2.0 - a) / q * nu_M);
  r.Lambda2 = 2.0 * g * W_M * mu_M + (1.0 / a) * (g / (2.0 - g)) * W_M * W_M +
              (-2.0 * g + (1.0 + g) * (1.0 + g) / q) * mu_M * mu_M +
              2.0 * (1.0 + g) / q * mu_M * nu_M + (2.0 - a) / q * nu_M * nu_M;
  const double disc = r.Lambda1 * r.Lambda1 + r.denominator * r.Lambda2;
  if (disc < 0.0) throw ConfigError("formation-error bound has a negative discriminant");
  r.e_M = (r.Lambda1 + std::sqrt(disc)) / r.denominator;

  r.xi = 2.0 * a * g * W_M * mu_M + g * g * W_M * W_M +
         (-2.0 * a * g + a * (1.0 + g) * (1.0 + g) / q) * mu_M * mu_M +
         2.0 * a * (1.0 + g) / q * mu_M * nu_M + a * (2.0 - a) / q * nu_M * nu_M +
         sigma_LtL / r.denominator * r.Lambda1 * r.Lambda1;
  const double lin = g * (1.0 - g) * W_M;
  const double wdisc = lin * lin + g * (2.0 - g) * r.xi;
  if (wdisc < 0.0) throw ConfigError("weight-error bound has a negative discriminant");
  r.W_tilde_M = (lin + std::sqrt(wdisc)) / (g * (2.0 - g));
  return r;
}

FormationBound compute_e_M(const BoundSet& b, const LaplacianBundle& bundle,
                           const ControlGains& gains, const TuningParams& tuning) {
  return compute_e_M(b.mu_M, b.nu_M, b.W_M, b.phi_M, tuning, gains.c,
                     gain_spectra(gains, bundle));
}

ResidualThreshold compute_threshold_pi(double mu_M, double W_M, double e_M, double phi_M,
                                       const TuningParams& tuning, double sigma_G) {
  const double a = tuning.alpha;
  const double g = tuning.gamma;
  const double eta = eta_of(tuning, phi_M);
  const double q = 1.0 - a * phi_M * phi_M;

  ResidualThreshold r;
  r.denominator = 1.0 - eta * sigma_G * sigma_G;
  if (!(r.denominator > 0.0)) {
    throw ConfigError(fmt::format(
        "observer-gain condition (31) violated: 1 - eta sigma(G)^2 = {} is not positive",
        r.denominator));
  }
  r.rho1 = (g + 1.0) / q * sigma_G * mu_M + eta * sigma_G * e_M;
  r.rho2 = 2.0 * g * mu_M * W_M + (1.0 / a) * (g / (2.0 - g)) * W_M * W_M +
           (-2.0 * g + (1.0 + g) * (1.0 + g) / q) * mu_M * mu_M +
           2.0 * mu_M * (g + 1.0) / q * e_M + eta * e_M * e_M;
  const double disc = r.rho1 * r.rho1 + r.denominator * r.rho2;
  if (disc < 0.0) throw ConfigError("residual threshold has a negative discriminant");
  r.pi = (r.rho1 + std::sqrt(disc)) / r.denominator;
  return r;
}

ResidualThreshold compute_threshold_pi(const BoundSet& b, const ControlGains& gains,
                                       const TuningParams& tuning) {
  const double sigma_g = block_diagonal(gains.observer).diagonal().cwiseAbs().maxCoeff();
  return compute_threshold_pi(b.mu_M, b.W_M, b.e_M, b.phi_M, tuning, sigma_g);
}

namespace {

struct Field {
  const char* key;
  double BoundSet::*member;
  const char* comment;
};

constexpr Field kFields[] = {
    {"w_M", &BoundSet::w_M, "disturbance bound"},
    {"eps_M", &BoundSet::eps_M, "approximation-error bound"},
    {"W_M", &BoundSet::W_M, "ideal-weight bound (Frobenius)"},
    {"phi_M", &BoundSet::phi_M, "activation bound"},
    {"F_M", &BoundSet::F_M, "leader-dynamics bound"},
    {"d_M", &BoundSet::d_M, "formation-offset bound"},
    {"mu_M", &BoundSet::mu_M, "eps_M + w_M"},
    {"nu_M", &BoundSet::nu_M, "F_M + d_M"},
    {"e_M", &BoundSet::e_M, "formation-error bound used for pi"},
    {"e_M_formula", &BoundSet::e_M_formula, "closed-form formation-error bound"},
    {"Lambda1", &BoundSet::Lambda1, nullptr},
    {"Lambda2", &BoundSet::Lambda2, nullptr},
    {"xi", &BoundSet::xi, nullptr},
    {"W_tilde_M", &BoundSet::W_tilde_M, "weight-error ultimate bound"},
    {"rho1", &BoundSet::rho1, nullptr},
    {"rho2", &BoundSet::rho2, nullptr},
    {"pi", &BoundSet::pi, "residual threshold"},
    {"alpha", &BoundSet::alpha, nullptr},
    {"gamma", &BoundSet::gamma, nullptr},
    {"eta", &BoundSet::eta, nullptr},
    {"c", &BoundSet::c, nullptr},
    {"sigma_G", &BoundSet::sigma_G, nullptr},
    {"sigma_P", &BoundSet::sigma_P, nullptr},
    {"sigma_Lbar", &BoundSet::sigma_Lbar, nullptr},
    {"sigma_min_LB", &BoundSet::sigma_min_LB, nullptr},
    {"safety_factor", &BoundSet::safety_factor, nullptr},
};

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  auto s = fmt::format("{}", v);
  // Keep integral values as floats so the file re-reads with the same type.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::string format_bound_set(const BoundSet& b) {
  std::string out = "# formguard bound set\n";
  for (const auto& f : kFields) {
    out += fmt::format("{} = {}", f.key, number(b.*(f.member)));
    if (f.comment) out += fmt::format("  # {}", f.comment);
    out += '\n';
  }
  out += fmt::format("e_M_source = \"{}\"\n", b.e_M_source);
  if (b.reference_pi) out += fmt::format("reference_pi = {}\n", number(*b.reference_pi));
  return out;
}

BoundSet parse_bound_set(const std::string& text) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError(fmt::format("bound set line {}: {}", e.source().begin.line, e.description()));
  }
  BoundSet b;
  std::map<std::string, bool> seen;
  for (auto&& [key, node] : tbl) {
    const std::string k(key.str());
    seen[k] = true;
    if (k == "e_M_source") {
      auto v = node.value<std::string>();
      if (!v || (*v != "observed" && *v != "formula")) {
        throw ConfigError("bound set: e_M_source must be \"observed\" or \"formula\"");
      }
      b.e_M_source = *v;
      continue;
    }
    auto v = node.value<double>();
    if (!v) throw ConfigError("bound set: value of '" + k + "' is not a number");
    if (k == "reference_pi") {
      b.reference_pi = *v;
      continue;
    }
    bool known = false;
    for (const auto& f : kFields) {
      if (k == f.key) {
        b.*(f.member) = *v;
        known = true;
      }
    }
    if (!known) throw ConfigError("bound set: unknown key '" + k + "'");
  }
  for (const char* required : {"pi", "mu_M", "W_M", "e_M", "phi_M"}) {
    if (!seen.count(required)) throw ConfigError(std::string("bound set: missing ") + required);
  }
  return b;
}

BoundSet load_bound_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open bound set file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bound_set(ss.str());
}

void save_bound_set(const BoundSet& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write bound set file " + path);
  out << format_bound_set(b);
}

}  // namespace formguard
