#include "fls/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fls/csv.hpp"

namespace fls {

namespace {

void require_m(const SampleMoments &mom, std::size_t m, const char *what) {
  if (m == 0)
    throw std::domain_error(std::string(what) + ": m must be >= 1");
  if (m > mom.J())
    throw std::domain_error(std::string(what) + ": m = " + std::to_string(m) +
                            " exceeds J = " + std::to_string(mom.J()));
}

void require_weights(const WeightVector &w, std::size_t m, const char *what) {
  if (w.size() < m)
    throw std::invalid_argument(std::string(what) +
                                ": weights shorter than m = " +
                                std::to_string(m));
}

void require_eta(double eta) {
  if (!(eta >= 1.0))
    throw std::invalid_argument("eta must be >= 1");
}

// Smallest index attaining the minimum of criterion over 1..M.
std::size_t first_argmin(const SelectionTrace &t, std::size_t M) {
  std::size_t best = 1;
  double best_value = t.criterion(1);
  for (std::size_t m = 2; m <= M; ++m) {
    const double v = t.criterion(m);
    if (v < best_value) {
      best_value = v;
      best = m;
    }
  }
  return best;
}

} // namespace

MomentAccumulator::MomentAccumulator(std::size_t J, bool centered_sigma)
    : gsum_(J, 0.0), lsum_(J, 0.0), centered_(centered_sigma) {
  if (J == 0)
    throw std::domain_error("MomentAccumulator: J must be >= 1");
}

void MomentAccumulator::add(double y, std::span<const double> x) {
  if (x.size() != gsum_.size())
    throw std::invalid_argument("MomentAccumulator: unit has wrong length");
  for (std::size_t j = 0; j < x.size(); ++j) {
    gsum_[j] += y * x[j];
    lsum_[j] += x[j] * x[j];
  }
  ysum_ += y;
  y2sum_ += y * y;
  ++count_;
}

SampleMoments MomentAccumulator::finish() const {
  if (count_ == 0)
    throw std::domain_error("moments: empty sample");
  const double n = static_cast<double>(count_);
  SampleMoments m;
  m.n = count_;
  m.ghat.resize(gsum_.size());
  m.lhat.resize(lsum_.size());
  for (std::size_t j = 0; j < gsum_.size(); ++j) {
    m.ghat[j] = gsum_[j] / n;
    m.lhat[j] = lsum_[j] / n;
  }
  m.sigmaY2_hat = y2sum_ / n;
  if (centered_) {
    const double mean = ysum_ / n;
    m.sigmaY2_hat = std::max(0.0, m.sigmaY2_hat - mean * mean);
  }
  return m;
}

SampleMoments moments(const Sample &sample, bool centered_sigma) {
  if (sample.n == 0)
    throw std::domain_error("moments: empty sample");
  MomentAccumulator acc(sample.J, centered_sigma);
  for (std::size_t i = 0; i < sample.n; ++i)
    acc.add(sample.Y[i], sample.row(i));
  return acc.finish();
}

CoefVector estimate_beta(const SampleMoments &mom, std::size_t m) {
  require_m(mom, m, "estimate_beta");
  std::vector<double> b(m, 0.0);
  for (std::size_t j = 1; j <= m; ++j)
    if (mom.passes_threshold(j))
      b[j - 1] = mom.ghat[j - 1] / mom.lhat[j - 1];
  return CoefVector(std::move(b));
}

CoefVector inverse_image(const SampleMoments &mom) {
  return estimate_beta(mom, mom.J());
}

std::vector<double> contrast_path(const SampleMoments &mom,
                                  const WeightVector &w, std::size_t m_max) {
  require_m(mom, m_max, "contrast");
  require_weights(w, m_max, "contrast");
  std::vector<double> out(m_max);
  double acc = 0.0;
  for (std::size_t j = 1; j <= m_max; ++j) {
    if (mom.passes_threshold(j)) {
      const double r = mom.ghat[j - 1] / mom.lhat[j - 1];
      acc -= w[j - 1] * r * r;
    }
    out[j - 1] = acc;
  }
  return out;
}

double contrast(const SampleMoments &mom, const WeightVector &w,
                std::size_t m) {
  return contrast_path(mom, w, m).back();
}

double penalty_known(const PenaltyScales &scales, double sigmaY2, double eta,
                     std::size_t n, std::size_t m, double pen_const) {
  require_eta(eta);
  if (m == 0 || m > scales.size())
    throw std::domain_error("penalty_known: m outside the computed scales");
  if (n == 0)
    throw std::domain_error("penalty_known: n must be >= 1");
  return pen_const * sigmaY2 * eta * scales.delta[m - 1] /
         static_cast<double>(n);
}

std::vector<EstimatedScales> estimated_scales_path(const SampleMoments &mom,
                                                   const WeightVector &w,
                                                   std::size_t m_max) {
  require_m(mom, m_max, "estimated_scales");
  require_weights(w, m_max, "estimated_scales");
  std::vector<EstimatedScales> out(m_max);
  double Delta = 0.0, kappa = 0.0;
  for (std::size_t m = 1; m <= m_max; ++m) {
    if (mom.passes_threshold(m)) {
      const double l = mom.lhat[m - 1];
      Delta = std::max(Delta, w[m - 1] / l);
      kappa = std::max(kappa, std::max(w[m - 1], 1.0) / l);
    }
    const double log_m2 = std::log(static_cast<double>(m) + 2.0);
    const double factor =
        std::abs(std::log(std::max(kappa, static_cast<double>(m) + 2.0)) / log_m2);
    out[m - 1] = {Delta, kappa, static_cast<double>(m) * Delta * factor};
  }
  return out;
}

EstimatedScales estimated_scales(const SampleMoments &mom,
                                 const WeightVector &w, std::size_t m) {
  return estimated_scales_path(mom, w, m).back();
}

double penalty_hat(const SampleMoments &mom, const WeightVector &w, double eta,
                   std::size_t m, double pen_const) {
  require_eta(eta);
  const double delta = estimated_scales(mom, w, m).delta;
  const double unit =
      pen_const * mom.sigmaY2_hat * eta / static_cast<double>(mom.n);
  return unit * delta;
}

std::size_t bound_N_from_weights(const WeightVector &w, std::size_t n) {
  const std::size_t cap = std::min(n, w.size());
  const double limit = static_cast<double>(n);
  double running_max = 0.0;
  std::size_t best = 1;
  for (std::size_t N = 1; N <= cap; ++N) {
    running_max = std::max(running_max, w[N - 1]);
    if (running_max <= limit)
      best = N;
  }
  return best;
}

std::size_t bound_M_hat(const SampleMoments &mom, const WeightVector &w) {
  if (mom.n < 2)
    throw std::domain_error("bound_M_hat: n must be >= 2");
  const std::size_t N =
      std::min(bound_N_from_weights(w, mom.n), mom.J());
  const double n = static_cast<double>(mom.n);
  const double threshold = std::log(n) / n;
  std::size_t best = 1;
  for (std::size_t M = 1; M <= N; ++M) {
    const double scaled = mom.lhat[M - 1] /
                          (static_cast<double>(M) * std::max(w[M - 1], 1.0));
    if (scaled >= threshold)
      best = M;
  }
  return best;
}

std::string_view to_string(Variant v) noexcept {
  return v == Variant::KnownDegree ? "known" : "data_driven";
}

SelectionTrace select_known(const SampleMoments &mom, const WeightVector &w,
                            const PenaltyScales &scales, std::size_t M_n,
                            double eta, double pen_const) {
  if (M_n < 1)
    throw std::domain_error("select_known: M_n must be >= 1");
  if (M_n > scales.size() || M_n > mom.J() || M_n > w.size())
    throw std::domain_error("select_known: M_n = " + std::to_string(M_n) +
                            " exceeds the available coefficients");
  require_eta(eta);
  const std::size_t evaluated =
      std::min({mom.J(), w.size(), scales.size(), 2 * M_n});
  SelectionTrace t;
  t.variant = Variant::KnownDegree;
  t.admissible_max = M_n;
  t.eta = eta;
  t.pen_const = pen_const;
  t.contrast = contrast_path(mom, w, evaluated);
  t.penalty.resize(evaluated);
  t.delta_used.assign(scales.delta.begin(),
                      scales.delta.begin() + static_cast<long>(evaluated));
  for (std::size_t m = 1; m <= evaluated; ++m)
    t.penalty[m - 1] =
        penalty_known(scales, mom.sigmaY2_hat, eta, mom.n, m, pen_const);
  t.m_hat = first_argmin(t, M_n);
  return t;
}

SelectionTrace select_data_driven(const SampleMoments &mom,
                                  const WeightVector &w, double eta,
                                  double pen_const) {
  require_eta(eta);
  const std::size_t M_hat = bound_M_hat(mom, w);
  const std::size_t evaluated = std::min({mom.J(), w.size(), 2 * M_hat});
  SelectionTrace t;
  t.variant = Variant::DataDriven;
  t.admissible_max = M_hat;
  t.eta = eta;
  t.pen_const = pen_const;
  t.contrast = contrast_path(mom, w, evaluated);
  const auto scales = estimated_scales_path(mom, w, evaluated);
  t.penalty.resize(evaluated);
  t.delta_used.resize(evaluated);
  const double unit =
      pen_const * mom.sigmaY2_hat * eta / static_cast<double>(mom.n);
  for (std::size_t m = 1; m <= evaluated; ++m) {
    t.delta_used[m - 1] = scales[m - 1].delta;
    t.penalty[m - 1] = unit * scales[m - 1].delta;
  }
  t.m_hat = first_argmin(t, M_hat);
  return t;
}

void write_trace_csv(std::ostream &out, const SelectionTrace &trace,
                     const std::string &comment) {
  out << "# " << comment << '\n';
  out << "m,contrast,penalty,delta_used,admissible,chosen\n";
  for (std::size_t m = 1; m <= trace.evaluated(); ++m) {
    out << m << ',' << format_double(trace.contrast[m - 1]) << ','
        << format_double(trace.penalty[m - 1]) << ','
        << format_double(trace.delta_used[m - 1]) << ','
        << (m <= trace.admissible_max ? 1 : 0) << ','
        << (m == trace.m_hat ? 1 : 0) << '\n';
  }
}

} // namespace fls
