#ifndef FFF_THINNER_HPP
#define FFF_THINNER_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace fff {

/// Reads a piecewise-constant trajectory at deterministic grid times k*stride
/// (the state holding at each grid time), starting at t = 0 with the initial
/// state. With a sample cap, the stride doubles whenever the buffer fills and
/// every other sample is dropped; the surviving samples always sit on the
/// current grid, so the final set equals a single-pass read at the final
/// stride. The partial segment after the last offered interval never emits.
class GridThinner {
 public:
  GridThinner(double stride, std::int64_t max_samples, Eigen::Index dim)
      : stride_(stride), cap_(max_samples), dim_(dim) {
    if (!(stride > 0.0)) throw std::invalid_argument("stride must be > 0");
    if (cap_ != 0 && cap_ < 2)
      throw std::invalid_argument("max_samples must be 0 or >= 2");
  }

  /// State q held for the next `hold` units of process time.
  void offer(const Eigen::VectorXd& q, double hold) {
    const double t1 = t_ + hold;
    while (static_cast<double>(next_k_) * stride_ < t1) {
      buf_.push_back(q);
      ++next_k_;
      if (cap_ != 0 && static_cast<std::int64_t>(buf_.size()) >= cap_)
        halve();
    }
    t_ = t1;
  }

  double stride() const { return stride_; }
  double elapsed() const { return t_; }
  std::int64_t count() const { return static_cast<std::int64_t>(buf_.size()); }

  Eigen::MatrixXd to_matrix() const {
    Eigen::MatrixXd m(buf_.size(), dim_);
    for (std::size_t i = 0; i < buf_.size(); ++i) m.row(i) = buf_[i];
    return m;
  }

 private:
  void halve() {
    std::size_t kept = 0;
    for (std::size_t i = 0; i < buf_.size(); i += 2) buf_[kept++] = buf_[i];
    buf_.resize(kept);
    stride_ *= 2.0;
    next_k_ = (next_k_ + 1) / 2;
  }

  double stride_;
  std::int64_t cap_;
  Eigen::Index dim_;
  double t_ = 0.0;
  std::int64_t next_k_ = 0;
  std::vector<Eigen::VectorXd> buf_;
};

}  // namespace fff

#endif  // FFF_THINNER_HPP
