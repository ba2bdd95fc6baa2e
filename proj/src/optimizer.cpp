#include "dvqe/optimizer.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

#include "dvqe/error.hpp"

namespace dvqe {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::AmplitudeChange: return "amplitude_change";
    case Termination::Gradient: return "gradient";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::LineSearchFailure: return "line_search_failure";
  }
  return "unknown";
}

namespace {

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double d = 0.0;  // directional derivative
  Eigen::VectorXd g;
};

class LineSearch {
 public:
  LineSearch(const Objective& f, const Eigen::VectorXd& x, const Eigen::VectorXd& p,
             const Point& start, const BfgsConfig& cfg, long& evals)
      : f_(f), x_(x), p_(p), s0_(start), cfg_(cfg), evals_(evals) {}

  // strong Wolfe point, or the best sufficient-decrease point found
  std::optional<Point> run(double alpha0) {
    Point prev = s0_;
    double alpha = alpha0;
    for (int i = 0; i < cfg_.max_line_search; ++i) {
      Point cur = eval(alpha);
      if (!armijo(cur) || (i > 0 && cur.f >= prev.f)) return zoom(prev, cur);
      if (std::abs(cur.d) <= -cfg_.c2 * s0_.d) return cur;
      if (cur.d >= 0.0) return zoom(cur, prev);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return fallback();
  }

 private:
  bool armijo(const Point& q) const { return q.f <= s0_.f + cfg_.c1 * q.alpha * s0_.d; }

  Point eval(double alpha) {
    Point q;
    q.alpha = alpha;
    q.f = f_(x_ + alpha * p_, q.g);
    ++evals_;
    if (!std::isfinite(q.f)) throw ContractViolation("objective returned a non-finite value");
    q.d = q.g.dot(p_);
    if (armijo(q) && (!best_ || q.f < best_->f)) best_ = q;
    return q;
  }

  std::optional<Point> fallback() const {
    if (best_ && best_->f < s0_.f) return best_;
    return std::nullopt;
  }

  std::optional<Point> zoom(Point lo, Point hi) {
    for (int i = 0; i < cfg_.max_line_search; ++i) {
      const double a = lo.alpha, b = hi.alpha;
      const double width = std::abs(b - a);
      if (width <= 1e-14 * std::max(1.0, std::abs(a))) break;
      // cubic through both ends, kept inside the middle 80 %
      double t;
      const double d1 = lo.d + hi.d - 3.0 * (lo.f - hi.f) / (a - b);
      const double disc = d1 * d1 - lo.d * hi.d;
      if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        t = b - (b - a) * (hi.d + d2 - d1) / (hi.d - lo.d + 2.0 * d2);
      } else {
        t = 0.5 * (a + b);
      }
      const double lo_end = std::min(a, b) + 0.1 * width, hi_end = std::max(a, b) - 0.1 * width;
      if (!std::isfinite(t) || t < lo_end || t > hi_end) t = 0.5 * (a + b);
      Point cur = eval(t);
      if (!armijo(cur) || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.d) <= -cfg_.c2 * s0_.d) return cur;
        if (cur.d * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    return fallback();
  }

  const Objective& f_;
  const Eigen::VectorXd& x_;
  const Eigen::VectorXd& p_;
  const Point& s0_;
  const BfgsConfig& cfg_;
  long& evals_;
  std::optional<Point> best_;
};

// inverse-Hessian model: dense lower triangle or limited-memory pairs
class InverseHessian {
 public:
  InverseHessian(Eigen::Index n, bool limited, int history)
      : n_(n), limited_(limited), history_(history) {
    if (!limited_) h_ = Eigen::MatrixXd::Identity(n, n);
  }

  void reset() {
    pairs_.clear();
    scale_ = 1.0;
    first_ = true;
    if (!limited_) h_.setIdentity();
  }

  Eigen::VectorXd direction(const Eigen::VectorXd& g) const {
    if (!limited_) return -(h_.selfadjointView<Eigen::Lower>() * g);
    Eigen::VectorXd q = g;
    std::vector<double> a(pairs_.size());
    for (std::size_t k = pairs_.size(); k-- > 0;) {
      a[k] = pairs_[k].rho * pairs_[k].s.dot(q);
      q -= a[k] * pairs_[k].y;
    }
    q *= scale_;
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      const double b = pairs_[k].rho * pairs_[k].y.dot(q);
      q += (a[k] - b) * pairs_[k].s;
    }
    return -q;
  }

  void update(const Eigen::VectorXd& s, const Eigen::VectorXd& y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-12 * s.norm() * y.norm())) return;  // keeps the model positive definite
    const double rho = 1.0 / sy;
    if (limited_) {
      scale_ = sy / y.squaredNorm();
      pairs_.push_back({s, y, rho});
      if (static_cast<int>(pairs_.size()) > history_) pairs_.pop_front();
      return;
    }
    if (first_) {
      h_.diagonal().setConstant(sy / y.squaredNorm());
      first_ = false;
    }
    const Eigen::VectorXd hy = h_.selfadjointView<Eigen::Lower>() * y;
    const double yhy = y.dot(hy);
    h_.selfadjointView<Eigen::Lower>().rankUpdate(s, hy, -rho);
    h_.selfadjointView<Eigen::Lower>().rankUpdate(s, rho * rho * yhy + rho);
  }

 private:
  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };
  Eigen::Index n_;
  bool limited_;
  int history_;
  bool first_ = true;
  double scale_ = 1.0;
  Eigen::MatrixXd h_;
  std::deque<Pair> pairs_;
};

}  // namespace

BfgsResult bfgs_minimize(const Objective& f, Eigen::VectorXd x0, const BfgsConfig& config,
                         const std::function<void(const OptimizerStep&)>& on_step) {
  BfgsResult r;
  r.x = std::move(x0);
  r.value = f(r.x, r.gradient);
  r.evaluations = 1;
  if (!std::isfinite(r.value)) throw ContractViolation("objective returned a non-finite value");
  const Eigen::Index n = r.x.size();
  if (on_step) on_step({0, r.value, n ? r.gradient.lpNorm<Eigen::Infinity>() : 0.0, 0.0, 1});
  if (n == 0 || r.gradient.lpNorm<Eigen::Infinity>() < config.grad_tol) {
    r.reason = Termination::Gradient;
    r.converged = true;
    return r;
  }
  const bool limited =
      config.limited_memory || static_cast<std::size_t>(n) > config.dense_limit;
  InverseHessian model(n, limited, config.history);

  for (int it = 1; it <= config.max_iter; ++it) {
    Eigen::VectorXd p = model.direction(r.gradient);
    double slope = p.dot(r.gradient);
    if (!(slope < 0.0)) {
      model.reset();
      p = -r.gradient;
      slope = p.dot(r.gradient);
    }
    Point start{0.0, r.value, slope, r.gradient};
    std::optional<Point> hit = LineSearch(f, r.x, p, start, config, r.evaluations).run(1.0);
    if (!hit && it > 1) {
      // retry once along steepest descent with a fresh model
      model.reset();
      p = -r.gradient;
      start.d = p.dot(r.gradient);
      hit = LineSearch(f, r.x, p, start, config, r.evaluations)
                .run(1.0 / std::max(1.0, r.gradient.lpNorm<Eigen::Infinity>()));
    }
    if (!hit) {
      spdlog::warn("line search failed at iteration {}", it);
      r.reason = Termination::LineSearchFailure;
      r.iterations = it - 1;
      return r;
    }
    const Eigen::VectorXd s = hit->alpha * p;
    const Eigen::VectorXd y = hit->g - r.gradient;
    r.x += s;
    r.value = hit->f;
    r.gradient = std::move(hit->g);
    r.iterations = it;
    model.update(s, y);

    const double step = s.lpNorm<Eigen::Infinity>();
    const double gmax = r.gradient.lpNorm<Eigen::Infinity>();
    if (on_step) on_step({it, r.value, gmax, step, r.evaluations});
    if (gmax < config.grad_tol) {
      r.reason = Termination::Gradient;
      r.converged = true;
      return r;
    }
    if (step < config.amp_tol) {
      r.reason = Termination::AmplitudeChange;
      r.converged = true;
      return r;
    }
  }
  r.reason = Termination::MaxIterations;
  return r;
}

}  // namespace dvqe
