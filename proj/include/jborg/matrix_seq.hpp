#pragma once

#include <functional>
#include <vector>

#include "jborg/errors.hpp"
#include "jborg/linalg.hpp"

namespace jborg {

// Extension policy for evaluating a lattice sequence outside its window.
// ConstantTail repeats the nearest window entry; it is the default because
// the Weyl iterations walk arbitrarily far out.
enum class Extension { ConstantTail, Periodic, Forbidden };

// A sequence of complex m x m matrices indexed by a window [k_lo, k_hi] of
// the lattice Z, with an explicit out-of-window extension policy.
class MatrixSeq {
 public:
  MatrixSeq() = default;

  MatrixSeq(int k_lo, std::vector<Mat> entries,
            Extension ext = Extension::ConstantTail, int period = 0)
      : k_lo_(k_lo), entries_(std::move(entries)), ext_(ext), period_(period) {
    if (entries_.empty()) throw DimensionMismatch("MatrixSeq: empty window");
    m_ = static_cast<int>(entries_.front().rows());
    for (const Mat& e : entries_)
      if (e.rows() != m_ || e.cols() != m_)
        throw DimensionMismatch("MatrixSeq: entry is not m x m");
    if (ext_ == Extension::Periodic) {
      if (period_ <= 0 || static_cast<int>(entries_.size()) < period_)
        throw WindowTooSmall("MatrixSeq: window shorter than period");
      for (std::size_t i = period_; i < entries_.size(); ++i)
        if ((entries_[i] - entries_[i - period_]).norm() != 0.0)
          throw DimensionMismatch(
              "MatrixSeq: entries inconsistent under period identification");
    }
  }

  static MatrixSeq constant(const Mat& value, int k_lo, int k_hi,
                            Extension ext = Extension::ConstantTail) {
    return MatrixSeq(k_lo, std::vector<Mat>(k_hi - k_lo + 1, value), ext,
                     ext == Extension::Periodic ? 1 : 0);
  }

  int dim() const { return m_; }
  int k_lo() const { return k_lo_; }
  int k_hi() const { return k_lo_ + static_cast<int>(entries_.size()) - 1; }
  int size() const { return static_cast<int>(entries_.size()); }
  Extension extension() const { return ext_; }
  int period() const { return period_; }
  bool in_window(int k) const { return k >= k_lo() && k <= k_hi(); }

  const Mat& at(int k) const {
    if (in_window(k)) return entries_[k - k_lo_];
    switch (ext_) {
      case Extension::ConstantTail:
        return k < k_lo_ ? entries_.front() : entries_.back();
      case Extension::Periodic: {
        int r = (k - k_lo_) % period_;
        if (r < 0) r += period_;
        return entries_[r];
      }
      case Extension::Forbidden:
      default:
        throw OutOfWindow(k);
    }
  }

  Mat& entry(int k) {
    if (!in_window(k)) throw OutOfWindow(k);
    return entries_[k - k_lo_];
  }

  MatrixSeq map(const std::function<Mat(const Mat&)>& f) const {
    std::vector<Mat> out;
    out.reserve(entries_.size());
    for (const Mat& e : entries_) out.push_back(f(e));
    return MatrixSeq(k_lo_, std::move(out), ext_, period_);
  }

 private:
  int m_ = 0;
  int k_lo_ = 0;
  std::vector<Mat> entries_;
  Extension ext_ = Extension::ConstantTail;
  int period_ = 0;
};

}  // namespace jborg
