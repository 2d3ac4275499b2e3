#pragma once

// Seeded Monte Carlo campaigns shared by the CLI and the acceptance suite.
// Trial i of stream s always draws from substream(seed, s, i), so every
// campaign output is a pure function of (parameters, seed).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "betaop/distributions.hpp"
#include "betaop/ensembles.hpp"
#include "betaop/matrix_models.hpp"
#include "betaop/opuc.hpp"
#include "betaop/oracle.hpp"
#include "betaop/parallel.hpp"
#include "betaop/random.hpp"
#include "betaop/stats.hpp"

namespace betaop {

namespace streams {
inline constexpr std::uint64_t kMatrixModel = 1;
inline constexpr std::uint64_t kProductLaw = 2;
inline constexpr std::uint64_t kRejection = 3;
inline constexpr std::uint64_t kDeterminant = 4;
inline constexpr std::uint64_t kClt = 5;
inline constexpr std::uint64_t kMoments = 6;
inline constexpr std::uint64_t kSamples = 7;
}  // namespace streams

struct NamedKs {
  std::string name;
  KsResult ks;
};

// ---------------------------------------------------------------------------
// Determinant identities

struct DeterminantReport {
  std::size_t draws = 0;
  double charpoly_circular = 0.0;  // |det(z - C_n) - Phi_n(z)| / (1 + |Phi_n|)
  double charpoly_jacobi = 0.0;    // |det(x - J_n) - P_n(x)| / (1 + |P_n|)
  double edge_determinant = 0.0;   // det(+-2 - J_n) = (+-1)^n Phi_2n(+-1)
  double edge_product = 0.0;             // Phi_2n(+-1) = 2 prod(1 - (+-1)^{k+1} alpha_k), relative
};

/// Relative error of Phi_2n(+-1) against the closed product over the
/// interior coefficients, for both signs.
inline double edge_product_residual(const VerblunskySequence& alphas) {
  const auto coeffs = alphas.recursion_coefficients();
  double worst = 0.0;
  for (const int sign : {1, -1}) {
    const double phi = szego_evaluate(coeffs, cplx(sign, 0.0)).phi.real();
    double product = 2.0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      const double power = (sign == 1 || k % 2 == 1) ? 1.0 : -1.0;
      product *= 1.0 - power * alphas.values()[k].real();
    }
    worst = std::max(worst, std::abs(phi - product) / std::abs(product));
  }
  return worst;
}

/// Grid mixing points inside, on and outside the unit circle.
inline std::vector<cplx> circular_test_grid(Rng& rng) {
  std::vector<cplx> grid{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
  for (int i = 0; i < 8; ++i) {
    const double radius = 0.2 + 1.1 * uniform_closed_open(rng);
    grid.push_back(std::polar(radius, 2.0 * std::numbers::pi * uniform_closed_open(rng)));
  }
  return grid;
}

inline std::vector<cplx> jacobi_test_grid(Rng& rng) {
  std::vector<cplx> grid{{-2.0, 0.0}, {2.0, 0.0}, {0.0, 0.0}};
  for (int i = 0; i < 6; ++i) grid.emplace_back(-2.5 + 5.0 * uniform_closed_open(rng), 0.0);
  for (int i = 0; i < 3; ++i) {
    grid.emplace_back(-2.0 + 4.0 * uniform_closed_open(rng), -1.0 + 2.0 * uniform_closed_open(rng));
  }
  return grid;
}

/// Random circular and Jacobi draws evaluated on mixed grids. Without a
/// fixed spec each draw takes n uniform on [1, max_n], beta in [0.5, 4] and
/// a, b in (-0.9, 2); with one, every draw uses its n, beta, a and b.
inline DeterminantReport determinant_identities(std::size_t draws, std::size_t max_n,
                                                std::uint64_t seed, unsigned threads = 1,
                                                const EnsembleSpec* fixed = nullptr) {
  struct Row {
    double circular = 0, jacobi = 0, edge = 0, edge_product = 0;
  };
  if (fixed != nullptr) fixed->validate();
  const auto rows = parallel_trials<Row>(draws, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kDeterminant, i);
    std::size_t n = 1 + static_cast<std::size_t>(uniform_closed_open(rng) * static_cast<double>(max_n));
    double beta = 0.5 + 3.5 * uniform_closed_open(rng);
    double a = -0.9 + 2.9 * uniform_closed_open(rng);
    double b = -0.9 + 2.9 * uniform_closed_open(rng);
    if (fixed != nullptr) {
      n = fixed->n;
      beta = fixed->beta;
      a = fixed->kind == EnsembleKind::jacobi ? fixed->a : 0.0;
      b = fixed->kind == EnsembleKind::jacobi ? fixed->b : 0.0;
    }
    Row row;
    const auto circ = cmv_order(sample_cbe_alphas(n, beta, rng));
    row.circular = verify_charpoly(circ, circular_test_grid(rng));
    const auto jac = sample_jbe_alphas(n, beta, a, b, rng);
    row.jacobi = verify_charpoly(jac, jacobi_test_grid(rng));
    row.edge = verify_edge_determinants(jac);
    row.edge_product = edge_product_residual(jac);
    return row;
  });
  DeterminantReport out;
  out.draws = draws;
  for (const Row& r : rows) {
    out.charpoly_circular = std::max(out.charpoly_circular, r.circular);
    out.charpoly_jacobi = std::max(out.charpoly_jacobi, r.jacobi);
    out.edge_determinant = std::max(out.edge_determinant, r.edge);
    out.edge_product = std::max(out.edge_product, r.edge_product);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product laws of the characteristic polynomial

/// Log-modulus and argument (in (-pi, pi]) of prod(1 - e^{-i(theta - eta_k)})
/// from CMV eigenvalues, against the independent-product law.
inline std::vector<NamedKs> theorem1_circular(std::size_t n, double beta, double theta,
                                              std::size_t trials, std::uint64_t seed,
                                              unsigned threads = 1) {
  const EnsembleSpec spec = EnsembleSpec::circular(n, beta);
  const auto lhs = parallel_trials<cplx>(trials, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kMatrixModel, i);
    return linear_statistic_circular(cbe_points(spec, rng), theta).raw;
  });
  const auto rhs = parallel_trials<cplx>(trials, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kProductLaw, i);
    return std::log(theorem1_rhs_circular(n, beta, rng));
  });
  std::vector<double> lhs_mod, lhs_arg, rhs_mod, rhs_arg;
  for (std::size_t i = 0; i < trials; ++i) {
    lhs_mod.push_back(lhs[i].real());
    lhs_arg.push_back(std::remainder(lhs[i].imag(), 2.0 * std::numbers::pi));
    rhs_mod.push_back(rhs[i].real());
    rhs_arg.push_back(rhs[i].imag());
  }
  const std::string tag = "n=" + std::to_string(n) + ",beta=" + std::to_string(beta);
  return {
      {"log_modulus[" + tag + "]",
       ks_two_sample(SamplePool(lhs_mod, "eigenvalue"), SamplePool(rhs_mod, "product"))},
      {"argument[" + tag + "]",
       ks_two_sample(SamplePool(lhs_arg, "eigenvalue"), SamplePool(rhs_arg, "product"))},
  };
}

/// log prod|+-2 - x_k| from Jacobi eigenvalues against log of
/// 2 prod(1 - (+-1)^{k+1} X_k). For the minus sign prod(-2 - x_k) carries
/// the deterministic sign (-1)^n, so moduli are compared.
inline NamedKs theorem1_jacobi(std::size_t n, double beta, double a, double b, int sign,
                               std::size_t trials, std::uint64_t seed, unsigned threads = 1) {
  const EnsembleSpec spec = EnsembleSpec::jacobi(n, beta, a, b);
  const double edge = 2.0 * sign;
  const auto lhs = parallel_trials<double>(trials, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kMatrixModel, i);
    double acc = 0.0;
    for (const double x : jbe_points(spec, rng).points) acc += std::log(std::abs(edge - x));
    return acc;
  });
  const auto rhs = parallel_trials<double>(trials, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kProductLaw, i);
    return std::log(theorem1_rhs_jacobi(n, beta, a, b, sign, rng));
  });
  char label[128];
  std::snprintf(label, sizeof label, "log_edge_product[sign=%+d,n=%zu,beta=%g,a=%g,b=%g]", sign,
                n, beta, a, b);
  return {label, ks_two_sample(SamplePool(lhs, "eigenvalue"), SamplePool(rhs, "product"))};
}

// ---------------------------------------------------------------------------
// Central limit campaigns (recursion route)

struct CltRow {
  std::size_t n = 0;
  double theta = 0.0;
  double re_mean = 0.0;
  double re_var = 0.0;
  double im_mean = 0.0;
  double im_var = 0.0;
  double cross_corr = 0.0;  // corr(Re, Im)
  std::size_t trials = 0;
};

/// Correlations between the statistics at two distinct thetas.
struct ThetaPairCorrelation {
  std::size_t first = 0;  // theta indices
  std::size_t second = 0;
  double re_re = 0.0;
  double im_im = 0.0;
  double re_im = 0.0;  // Re at first, Im at second
  double im_re = 0.0;

  [[nodiscard]] double max_abs() const {
    return std::max({std::abs(re_re), std::abs(im_im), std::abs(re_im), std::abs(im_re)});
  }
};

struct CltReport {
  EnsembleSpec spec;
  std::vector<std::size_t> sizes;
  std::vector<double> thetas;
  std::vector<CltRow> rows;  // size-major, theta-minor
  std::vector<std::vector<ThetaPairCorrelation>> pair_corr;  // per size, pairs first < second

  [[nodiscard]] const CltRow& row(std::size_t size_index, std::size_t theta_index) const {
    return rows[size_index * thetas.size() + theta_index];
  }
  [[nodiscard]] const ThetaPairCorrelation& pair(std::size_t size_index, std::size_t first,
                                                 std::size_t second) const {
    for (const auto& p : pair_corr[size_index]) {
      if (p.first == first && p.second == second) return p;
    }
    throw ParameterDomainError("no correlation recorded for the requested theta pair");
  }
};

namespace detail {

inline CltReport summarize_clt(const EnsembleSpec& spec, const std::vector<std::size_t>& sizes,
                               const std::vector<double>& thetas,
                               const std::vector<std::vector<cplx>>& samples) {
  CltReport out{spec, sizes, thetas, {}, {}};
  const std::size_t trials = samples.size();
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    std::vector<std::vector<double>> re(thetas.size(), std::vector<double>(trials));
    std::vector<std::vector<double>> im(thetas.size(), std::vector<double>(trials));
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      for (std::size_t i = 0; i < trials; ++i) {
        const cplx z = samples[i][s * thetas.size() + t];
        re[t][i] = z.real();
        im[t][i] = z.imag();
      }
      const auto re_m = empirical_moments(SamplePool(re[t]), 2);
      const auto im_m = empirical_moments(SamplePool(im[t]), 2);
      out.rows.push_back({sizes[s], thetas[t], re_m[0].value, re_m[1].value, im_m[0].value,
                          im_m[1].value, correlation(re[t], im[t]), trials});
    }
    std::vector<ThetaPairCorrelation> pairs;
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      for (std::size_t u = t + 1; u < thetas.size(); ++u) {
        pairs.push_back({t, u, correlation(re[t], re[u]), correlation(im[t], im[u]),
                         correlation(re[t], im[u]), correlation(im[t], re[u])});
      }
    }
    out.pair_corr.push_back(std::move(pairs));
  }
  return out;
}

inline void check_clt_inputs(const std::vector<std::size_t>& sizes,
                             const std::vector<double>& thetas, std::size_t trials) {
  if (sizes.empty()) throw ParameterDomainError("CLT campaign needs at least one size");
  if (thetas.empty()) throw ParameterDomainError("CLT campaign needs at least one theta");
  if (trials < 2) throw ParameterDomainError("CLT campaign needs at least 2 trials");
  for (const std::size_t n : sizes) {
    if (n < 2) throw ParameterDomainError("CLT sizes must be >= 2 (log n normalisation)");
  }
}

}  // namespace detail

/// Z_n(theta) / sqrt(log n) for CbetaE at every (size, theta), from the
/// recursion route over matrix-ordered coefficients, so that the values at
/// different theta are those of one characteristic polynomial. The law of
/// the first coefficient depends on n, hence each size draws its own
/// sequence (in increasing size order from the trial's stream).
inline CltReport clt_circular(double beta, std::vector<std::size_t> sizes,
                              std::vector<double> thetas, std::size_t trials,
                              std::uint64_t seed, unsigned threads = 1) {
  detail::check_clt_inputs(sizes, thetas, trials);
  std::sort(sizes.begin(), sizes.end());
  const std::size_t max_n = sizes.back();
  const EnsembleSpec spec = EnsembleSpec::circular(max_n, beta);
  const auto samples = parallel_trials<std::vector<cplx>>(trials, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kClt, i);
    std::vector<cplx> out;
    out.reserve(sizes.size() * thetas.size());
    for (const std::size_t n : sizes) {
      const auto alphas = cmv_order(sample_cbe_alphas(n, beta, rng));
      const double scale = 1.0 / std::sqrt(std::log(static_cast<double>(n)));
      for (const double theta : thetas) {
        out.push_back(linear_statistic_circular(alphas, theta).raw * scale);
      }
    }
    return out;
  });
  return detail::summarize_clt(spec, sizes, thetas, samples);
}

/// (Z_n(2 cos theta) - E_n(theta)) / sqrt(log n) for JbetaE_{a,b}. Prefixes
/// of one coefficient stream give every size; the boundary factor
/// alpha_{2n-1} = -1 is applied at each checkpoint without consuming it.
inline CltReport clt_jacobi(double beta, double a, double b, std::vector<std::size_t> sizes,
                            std::vector<double> thetas, std::size_t trials, std::uint64_t seed,
                            unsigned threads = 1) {
  detail::check_clt_inputs(sizes, thetas, trials);
  std::sort(sizes.begin(), sizes.end());
  const std::size_t max_n = sizes.back();
  const EnsembleSpec spec = EnsembleSpec::jacobi(max_n, beta, a, b);
  const auto samples = parallel_trials<std::vector<cplx>>(trials, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kClt, i);
    std::vector<PhaseProductAccumulator> accs;
    for (const double theta : thetas) accs.emplace_back(theta);
    std::vector<cplx> out;
    out.reserve(sizes.size() * thetas.size());
    std::size_t next = 0;
    for (std::size_t k = 0; k + 1 < 2 * max_n; ++k) {
      const double alpha = sample_beta_sym(jacobi_coefficient_law(k, beta, a, b), rng);
      for (auto& acc : accs) acc.push(alpha);
      while (next < sizes.size() && 2 * sizes[next] - 1 == k + 1) {
        const std::size_t n = sizes[next];
        const double scale = 1.0 / std::sqrt(std::log(static_cast<double>(n)));
        for (const auto& acc : accs) {
          const double theta = acc.theta();
          const cplx raw = acc.value() + acc.term(-1.0) - cplx(0.0, static_cast<double>(n) * theta);
          out.push_back((raw - centering_term(theta, n, spec)) * scale);
        }
        ++next;
      }
    }
    return out;
  });
  return detail::summarize_clt(spec, sizes, thetas, samples);
}

// ---------------------------------------------------------------------------
// Oracle equivalence at tiny n

/// Matrix-model points against exact rejection samples: KS on each sorted
/// coordinate and on each consecutive gap.
inline std::vector<NamedKs> oracle_equivalence(const EnsembleSpec& spec, std::size_t samples,
                                               std::uint64_t seed, unsigned threads = 1) {
  if (spec.n < 2 || spec.n > RejectionSampler::kMaxPoints) {
    throw ParameterDomainError("oracle equivalence runs at n = 2 or 3");
  }
  const auto model = parallel_trials<std::vector<double>>(samples, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kMatrixModel, i);
    return (spec.kind == EnsembleKind::circular ? cbe_points(spec, rng) : jbe_points(spec, rng))
        .points;
  });
  // One sampler per trial keeps trials independent of scheduling; the
  // bound it computes is deterministic.
  const RejectionSampler prototype(spec);
  const auto exact = parallel_trials<std::vector<double>>(samples, threads, [&](std::size_t i) {
    Rng rng = substream(seed, streams::kRejection, i);
    RejectionSampler sampler = prototype;
    return sampler.sample(rng).points;
  });
  char tag[96];
  std::snprintf(tag, sizeof tag, "%s,n=%zu,beta=%g,a=%g,b=%g", to_string(spec.kind), spec.n,
                spec.beta, spec.a, spec.b);
  std::vector<NamedKs> out;
  const auto column = [&](const std::vector<std::vector<double>>& pool, std::size_t k, bool gap) {
    std::vector<double> v(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) v[i] = gap ? pool[i][k + 1] - pool[i][k] : pool[i][k];
    return v;
  };
  for (std::size_t k = 0; k < spec.n; ++k) {
    out.push_back({"marginal_" + std::to_string(k + 1) + "[" + tag + "]",
                   ks_two_sample(SamplePool(column(model, k, false), "model"),
                                 SamplePool(column(exact, k, false), "rejection"))});
  }
  for (std::size_t k = 0; k + 1 < spec.n; ++k) {
    out.push_back({"gap_" + std::to_string(k + 1) + "[" + tag + "]",
                   ks_two_sample(SamplePool(column(model, k, true), "model"),
                                 SamplePool(column(exact, k, true), "rejection"))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Moment adjudication

struct MomentRow {
  std::string law;  // "theta(nu=..)" or "beta_sym(s=..,t=..)"
  UpsilonPair pair = UpsilonPair::re_re;
  double psi = 0.0;
  double phi = 0.0;
  double oracle = 0.0;       // quadrature
  double closed_form = 0.0;  // integrated closed form
  double printed = 0.0;      // as printed (circular); equals closed form for Jacobi
  double mc = 0.0;
  double mc_se = 0.0;
};

inline std::string describe(const CoefficientLaw& law) {
  char buf[64];
  if (const auto* t = std::get_if<ThetaParams>(&law)) {
    std::snprintf(buf, sizeof buf, "theta(nu=%g)", t->nu());
  } else {
    const auto& s = std::get<BetaSymParams>(law);
    std::snprintf(buf, sizeof buf, "beta_sym(s=%g,t=%g)", s.s(), s.t());
  }
  return buf;
}

/// Quadrature, closed form, printed constant and Monte Carlo estimate for a
/// fixed panel of laws and phase pairs plus `random_cases` random ones.
inline std::vector<MomentRow> moment_adjudication(std::size_t mc_samples, std::size_t random_cases,
                                                  std::uint64_t seed, unsigned threads = 1) {
  struct Case {
    CoefficientLaw law;
    double psi, phi;
    UpsilonPair pair;
  };
  std::vector<Case> cases;
  const UpsilonPair pairs[] = {UpsilonPair::re_re, UpsilonPair::re_im, UpsilonPair::im_im};
  for (const double nu : {3.0, 7.5}) {
    for (const UpsilonPair p : pairs) cases.push_back({ThetaParams(nu), 0.4, 1.3, p});
  }
  cases.push_back({ThetaParams(3.0), 0.0, 0.0, UpsilonPair::re_re});
  for (const UpsilonPair p : pairs) cases.push_back({BetaSymParams(2.0, 3.0), 0.7, -0.2, p});
  cases.push_back({BetaSymParams(2.0, 3.0), 0.0, 0.0, UpsilonPair::re_re});
  Rng picker = substream(seed, streams::kMoments, 0xffffffffULL);
  for (std::size_t i = 0; i < random_cases; ++i) {
    const double s = 0.3 + 9.7 * uniform_closed_open(picker);
    const double t = 0.3 + 9.7 * uniform_closed_open(picker);
    const double psi = 2.0 * std::numbers::pi * uniform_closed_open(picker);
    const double phi = 2.0 * std::numbers::pi * uniform_closed_open(picker);
    cases.push_back({BetaSymParams(s, t), psi, phi, pairs[i % 3]});
    const double nu = 1.0 + 20.0 * uniform_closed_open(picker);
    cases.push_back({ThetaParams(nu), psi, phi, pairs[(i + 1) % 3]});
  }
  return parallel_trials<MomentRow>(cases.size(), threads, [&](std::size_t i) {
    const Case& c = cases[i];
    MomentRow row;
    row.law = describe(c.law);
    row.pair = c.pair;
    row.psi = c.psi;
    row.phi = c.phi;
    row.oracle = upsilon_moment_oracle(c.law, c.psi, c.phi, c.pair);
    row.closed_form = upsilon_moment_closed_form(c.law, c.psi, c.phi, c.pair);
    if (const auto* t = std::get_if<ThetaParams>(&c.law)) {
      row.printed = upsilon_moment_printed_circular(t->nu(), c.psi, c.phi, c.pair);
    } else {
      row.printed = row.closed_form;
    }
    Rng rng = substream(seed, streams::kMoments, i);
    const MomentEstimate mc = upsilon_moment_mc(c.law, c.psi, c.phi, c.pair, mc_samples, rng);
    row.mc = mc.value;
    row.mc_se = mc.standard_error;
    return row;
  });
}

}  // namespace betaop
