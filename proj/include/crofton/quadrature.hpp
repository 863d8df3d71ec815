#pragma once

// Integration domains and quadrature rules over subsets of R^m (C^n is
// identified with R^{2n} through interleaved real coordinates).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <atomic>
#include <exception>
#include <functional>
#include <sstream>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "crofton/numerics.hpp"
#include "crofton/random.hpp"

namespace crofton {

class Domain {
 public:
  enum class Kind { kBall, kBox };

  /// Ball in C^n with complex center.
  static Domain ball(const ComplexPoint& center, double radius) { return real_ball(center.to_real(), radius); }

  static Domain real_ball(std::vector<double> center, double radius) {
    if (center.empty()) throw InputError("Domain: ball needs at least one coordinate");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("Domain: ball radius must be positive");
    for (double c : center)
      if (!std::isfinite(c)) throw InputError("Domain: non-finite ball center");
    Domain d;
    d.kind_ = Kind::kBall;
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
  }

  static Domain box(std::vector<std::pair<double, double>> intervals) {
    if (intervals.empty()) throw InputError("Domain: box needs at least one interval");
    for (const auto& [lo, hi] : intervals) {
      if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw InputError("Domain: box interval is empty");
    }
    Domain d;
    d.kind_ = Kind::kBox;
    d.intervals_ = std::move(intervals);
    return d;
  }

  Kind kind() const { return kind_; }
  bool is_ball() const { return kind_ == Kind::kBall; }
  int real_dim() const { return static_cast<int>(is_ball() ? center_.size() : intervals_.size()); }
  int complex_dim() const {
    if (real_dim() % 2 != 0) throw InputError("Domain: odd real dimension is not a subset of C^n");
    return real_dim() / 2;
  }
  double radius() const { return radius_; }
  const std::vector<double>& center() const { return center_; }
  ComplexPoint complex_center() const { return ComplexPoint::from_real(center_); }
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

  std::vector<std::pair<double, double>> bounding_box() const {
    if (!is_ball()) return intervals_;
    std::vector<std::pair<double, double>> bb;
    for (double c : center_) bb.emplace_back(c - radius_, c + radius_);
    return bb;
  }

  bool contains(std::span<const double> x) const {
    if (is_ball()) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < center_.size(); ++i) r2 += (x[i] - center_[i]) * (x[i] - center_[i]);
      return r2 <= radius_ * radius_;
    }
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      if (x[i] < intervals_[i].first || x[i] > intervals_[i].second) return false;
    }
    return true;
  }

  double volume() const {
    if (is_ball()) return unit_ball_volume(real_dim()) * std::pow(radius_, real_dim());
    double v = 1.0;
    for (const auto& [lo, hi] : intervals_) v *= hi - lo;
    return v;
  }

  /// True if this domain lies inside `other` (exact for ball/box pairs).
  bool is_subset_of(const Domain& other) const {
    if (real_dim() != other.real_dim()) return false;
    if (is_ball() && other.is_ball()) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < center_.size(); ++i) d2 += std::pow(center_[i] - other.center_[i], 2);
      return std::sqrt(d2) + radius_ <= other.radius_;
    }
    // Compare bounding boxes when a box is involved; exact for box-in-box.
    if (other.is_ball()) {
      // Farthest corner of our bounding box must be inside the ball.
      double d2 = 0.0;
      const auto bb = bounding_box();
      for (std::size_t i = 0; i < bb.size(); ++i) {
        d2 += std::max(std::pow(bb[i].first - other.center_[i], 2), std::pow(bb[i].second - other.center_[i], 2));
      }
      return d2 <= other.radius_ * other.radius_;
    }
    const auto bb = bounding_box();
    for (std::size_t i = 0; i < bb.size(); ++i) {
      if (bb[i].first < other.intervals_[i].first || bb[i].second > other.intervals_[i].second) return false;
    }
    return true;
  }

 private:
  Kind kind_ = Kind::kBall;
  std::vector<double> center_;
  double radius_ = 0.0;
  std::vector<std::pair<double, double>> intervals_;
};

struct QuadratureSpec {
  enum class Method { kMonteCarlo, kQuasiMonteCarlo, kProductGauss };

  Method method = Method::kMonteCarlo;
  std::uint64_t sample_count = 200000;
  int nodes_per_axis = 32;
  std::uint64_t seed = 1;

  static QuadratureSpec monte_carlo(std::uint64_t samples, std::uint64_t seed) {
    return {Method::kMonteCarlo, samples, 0, seed};
  }
  static QuadratureSpec quasi_monte_carlo(std::uint64_t samples, std::uint64_t seed) {
    return {Method::kQuasiMonteCarlo, samples, 0, seed};
  }
  static QuadratureSpec product_gauss(int nodes_per_axis) { return {Method::kProductGauss, 0, nodes_per_axis, 0}; }

  void validate() const {
    if (method == Method::kProductGauss) {
      if (nodes_per_axis < 1) throw InputError("QuadratureSpec: nodes_per_axis must be >= 1");
    } else if (sample_count < 1) {
      throw InputError("QuadratureSpec: sample_count must be >= 1");
    }
  }
};

inline const char* to_string(QuadratureSpec::Method m) {
  switch (m) {
    case QuadratureSpec::Method::kMonteCarlo: return "monte-carlo";
    case QuadratureSpec::Method::kQuasiMonteCarlo: return "quasi-monte-carlo";
    case QuadratureSpec::Method::kProductGauss: return "product-gauss";
  }
  return "?";
}

struct QuadratureResult {
  double estimate = 0.0;
  double standard_error = 0.0;
};

namespace detail {

/// Running mean / sum of squared deviations; merged pairwise (Chan et al.).
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    Moments r;
    r.count = a.count + b.count;
    const double delta = b.mean - a.mean;
    r.mean = a.mean + delta * (b.count / r.count);
    r.m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / r.count);
    return r;
  }
};

/// Pairwise tree reduction in index order.
template <class T, class Merge>
T tree_reduce(std::vector<T> items, Merge merge) {
  if (items.empty()) return T{};
  while (items.size() > 1) {
    std::vector<T> next;
    next.reserve((items.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) next.push_back(merge(items[i], items[i + 1]));
    if (items.size() % 2 == 1) next.push_back(items.back());
    items = std::move(next);
  }
  return items.front();
}

inline std::atomic<unsigned> worker_thread_override{0};

/// Runs body(b) for b in [0, count). Blocks are assigned round-robin to
/// threads; results must be written to per-block slots by the body.
template <class Body>
void for_each_block(std::size_t count, Body&& body) {
  const unsigned requested = worker_thread_override.load();
  const unsigned hw = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, count);
  if (workers <= 1) {
    for (std::size_t b = 0; b < count; ++b) body(b);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t b = w; b < count; b += workers) body(b);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::string format_node(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

template <class F>
double checked_eval(F& f, std::span<const double> x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw IntegrationError("integrate: density is not finite (" + std::to_string(v) + ") at node " + format_node(x));
  }
  return v;
}

inline constexpr std::uint64_t kBlockSize = 4096;

template <class F>
QuadratureResult monte_carlo(F& f, const Domain& domain, const QuadratureSpec& spec) {
  const int m = domain.real_dim();
  const auto bb = domain.bounding_box();
  double box_volume = 1.0;
  for (const auto& [lo, hi] : bb) box_volume *= hi - lo;

  const std::uint64_t n = spec.sample_count;
  const std::size_t blocks = static_cast<std::size_t>((n + kBlockSize - 1) / kBlockSize);
  std::vector<Moments> partial(blocks);
  const RandomStream root(spec.seed);
  for_each_block(blocks, [&](std::size_t b) {
    RandomStream stream = root.derive(b);
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(n, begin + kBlockSize);
    std::vector<double> x(m);
    Moments mom;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (int k = 0; k < m; ++k) x[k] = stream.uniform(bb[k].first, bb[k].second);
      mom.add(domain.contains(x) ? checked_eval(f, x) : 0.0);
    }
    partial[b] = mom;
  });
  const Moments total = tree_reduce(std::move(partial), &Moments::merge);
  QuadratureResult r;
  r.estimate = box_volume * total.mean;
  r.standard_error = total.count > 1 ? box_volume * std::sqrt(total.m2 / (total.count - 1.0) / total.count) : 0.0;
  return r;
}

inline constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

inline double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

/// Randomly shifted Halton points; error is the gap between the estimate from
/// the full point set and from its first half.
template <class F>
QuadratureResult quasi_monte_carlo(F& f, const Domain& domain, const QuadratureSpec& spec) {
  const int m = domain.real_dim();
  if (m > static_cast<int>(std::size(kPrimes))) throw InputError("quasi-monte-carlo: dimension too large");
  const auto bb = domain.bounding_box();
  double box_volume = 1.0;
  for (const auto& [lo, hi] : bb) box_volume *= hi - lo;
  RandomStream shift_stream(spec.seed);
  std::vector<double> shift(m);
  for (auto& s : shift) s = shift_stream.uniform();

  const std::uint64_t n = spec.sample_count;
  const std::size_t blocks = static_cast<std::size_t>((n + kBlockSize - 1) / kBlockSize);
  std::vector<double> sums(blocks, 0.0);
  for_each_block(blocks, [&](std::size_t b) {
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(n, begin + kBlockSize);
    std::vector<double> x(m);
    double s = 0.0;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (int k = 0; k < m; ++k) {
        double u = radical_inverse(i + 1, kPrimes[k]) + shift[k];
        u -= std::floor(u);
        x[k] = bb[k].first + (bb[k].second - bb[k].first) * u;
      }
      if (domain.contains(x)) s += checked_eval(f, x);
    }
    sums[b] = s;
  });
  // Split at a block boundary so both halves are exact prefixes.
  const std::size_t half_blocks = blocks / 2;
  std::vector<double> first(sums.begin(), sums.begin() + static_cast<std::ptrdiff_t>(half_blocks));
  const double first_sum = tree_reduce(first, std::plus<>{});
  const double total = tree_reduce(sums, std::plus<>{});
  QuadratureResult r;
  r.estimate = box_volume * total / static_cast<double>(n);
  if (half_blocks > 0) {
    const double half_n = static_cast<double>(half_blocks * kBlockSize);
    r.standard_error = std::abs(r.estimate - box_volume * first_sum / half_n);
  } else {
    r.standard_error = std::abs(r.estimate);
  }
  return r;
}

}  // namespace detail

/// Number of worker threads for integration and sampling; 0 restores the
/// hardware default. Results do not depend on it.
inline void set_worker_threads(unsigned count) { detail::worker_thread_override.store(count); }

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
  if (order < 1) throw InputError("gauss_legendre: order must be >= 1");
  std::vector<double> x(order), w(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = w[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Composite Gauss-Legendre on [lo, hi]: panels of order min(n, 8).
inline std::pair<std::vector<double>, std::vector<double>> composite_gauss(int n, double lo, double hi) {
  const int order = std::min(n, 8);
  const int panels = (n + order - 1) / order;
  const auto [gx, gw] = gauss_legendre(order);
  std::vector<double> x, w;
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    for (int k = 0; k < order; ++k) {
      x.push_back(a + 0.5 * width * (gx[k] + 1.0));
      w.push_back(0.5 * width * gw[k]);
    }
  }
  return {x, w};
}

namespace detail {

template <class F>
double product_gauss_box(F& f, const std::vector<std::pair<double, double>>& box, int n) {
  const int m = static_cast<int>(box.size());
  std::vector<std::vector<double>> xs(m), ws(m);
  for (int k = 0; k < m; ++k) std::tie(xs[k], ws[k]) = composite_gauss(n, box[k].first, box[k].second);
  const std::size_t per_axis = xs[0].size();
  // The outermost axis is split into blocks for deterministic parallel sums.
  std::vector<double> partial(per_axis, 0.0);
  for_each_block(per_axis, [&](std::size_t i0) {
    std::vector<double> x(m);
    std::vector<std::size_t> idx(m, 0);
    idx[0] = i0;
    double s = 0.0;
    while (true) {
      double weight = 1.0;
      for (int k = 0; k < m; ++k) {
        x[k] = xs[k][idx[k]];
        weight *= ws[k][idx[k]];
      }
      s += weight * checked_eval(f, x);
      int k = m - 1;
      while (k >= 1 && ++idx[k] == per_axis) idx[k--] = 0;
      if (k < 1) break;
    }
    partial[i0] = s;
  });
  return tree_reduce(std::move(partial), std::plus<>{});
}

/// Ball quadrature by nested variable limits: x_k = c_k + rho_k sin(u_k),
/// rho_{k+1} = rho_k cos(u_k), u_k in [-pi/2, pi/2]. The Jacobian is
/// prod rho_k cos(u_k) and the map is smooth, so Gauss rules converge fast.
template <class F>
double product_gauss_ball(F& f, const Domain& ball, int n) {
  const int m = ball.real_dim();
  const auto [us, ws] = composite_gauss(n, -0.5 * kPi, 0.5 * kPi);
  const std::size_t per_axis = us.size();
  std::vector<double> sin_u(per_axis), cos_u(per_axis);
  for (std::size_t i = 0; i < per_axis; ++i) {
    sin_u[i] = std::sin(us[i]);
    cos_u[i] = std::cos(us[i]);
  }
  const auto& c = ball.center();
  std::vector<double> partial(per_axis, 0.0);
  for_each_block(per_axis, [&](std::size_t i0) {
    std::vector<double> x(m);
    std::vector<std::size_t> idx(m, 0);
    idx[0] = i0;
    double s = 0.0;
    while (true) {
      double rho = ball.radius();
      double weight = 1.0;
      for (int k = 0; k < m; ++k) {
        x[k] = c[k] + rho * sin_u[idx[k]];
        weight *= ws[idx[k]] * rho * cos_u[idx[k]];
        rho *= cos_u[idx[k]];
      }
      s += weight * checked_eval(f, x);
      int k = m - 1;
      while (k >= 1 && ++idx[k] == per_axis) idx[k--] = 0;
      if (k < 1) break;
    }
    partial[i0] = s;
  });
  return tree_reduce(std::move(partial), std::plus<>{});
}

template <class F>
QuadratureResult product_gauss(F& f, const Domain& domain, const QuadratureSpec& spec) {
  auto run = [&](int n) {
    return domain.is_ball() ? product_gauss_ball(f, domain, n) : product_gauss_box(f, domain.intervals(), n);
  };
  QuadratureResult r;
  r.estimate = run(spec.nodes_per_axis);
  r.standard_error = spec.nodes_per_axis >= 2 ? std::abs(r.estimate - run(spec.nodes_per_axis / 2)) : 0.0;
  return r;
}

}  // namespace detail

/// Integrates a real density f(x), x in R^m, over a domain. Monte Carlo reports
/// an unbiased estimate with its standard error; quasi-Monte Carlo and
/// product-Gauss report the gap between two resolutions as a heuristic error.
/// Deterministic for a fixed spec (including seed) regardless of thread count.
template <class F>
QuadratureResult integrate(F&& f, const Domain& domain, const QuadratureSpec& spec) {
  spec.validate();
  switch (spec.method) {
    case QuadratureSpec::Method::kMonteCarlo: return detail::monte_carlo(f, domain, spec);
    case QuadratureSpec::Method::kQuasiMonteCarlo: return detail::quasi_monte_carlo(f, domain, spec);
    case QuadratureSpec::Method::kProductGauss: return detail::product_gauss(f, domain, spec);
  }
  throw InputError("integrate: unknown method");
}

}  // namespace crofton
