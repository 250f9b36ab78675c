#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#include "qdiv/errors.hpp"

namespace qdiv {

// Extended real value in [-inf, +inf]. Divergences and exponents return these;
// the infinities carry the "+inf otherwise" branches of the support conditions.
class ExtReal {
 public:
  enum class Tag { Finite, PosInf, NegInf };

  ExtReal() : tag_(Tag::Finite), value_(0.0) {}

  static ExtReal finite(double v) {
    if (std::isnan(v)) throw Error("ExtReal: NaN is not an extended real");
    if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
    ExtReal r;
    r.tag_ = Tag::Finite;
    r.value_ = v;
    return r;
  }
  static ExtReal pos_inf() {
    ExtReal r;
    r.tag_ = Tag::PosInf;
    return r;
  }
  static ExtReal neg_inf() {
    ExtReal r;
    r.tag_ = Tag::NegInf;
    return r;
  }

  // log with the order-completion convention log(0) = -inf.
  static ExtReal log_of(double x) {
    if (x < 0) throw Error("ExtReal::log_of: negative argument");
    if (x == 0) return neg_inf();
    return finite(std::log(x));
  }

  Tag tag() const { return tag_; }
  bool is_finite() const { return tag_ == Tag::Finite; }
  bool is_pos_inf() const { return tag_ == Tag::PosInf; }
  bool is_neg_inf() const { return tag_ == Tag::NegInf; }

  double value() const {
    if (!is_finite()) throw InfiniteError("ExtReal::value: not finite");
    return value_;
  }

  // IEEE double view: infinities map to +/-INFINITY.
  double as_double() const {
    switch (tag_) {
      case Tag::PosInf: return std::numeric_limits<double>::infinity();
      case Tag::NegInf: return -std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  ExtReal operator+(const ExtReal& o) const {
    if (is_finite() && o.is_finite()) return finite(value_ + o.value_);
    if ((is_pos_inf() && o.is_neg_inf()) || (is_neg_inf() && o.is_pos_inf()))
      throw Error("ExtReal: +inf + -inf is undefined");
    return (is_pos_inf() || o.is_pos_inf()) ? pos_inf() : neg_inf();
  }
  ExtReal operator-() const {
    if (is_pos_inf()) return neg_inf();
    if (is_neg_inf()) return pos_inf();
    return finite(-value_);
  }
  ExtReal operator-(const ExtReal& o) const { return *this + (-o); }

  // Scaling by a finite nonzero factor flips infinities with the sign;
  // scaling by 0 gives 0 only for finite values.
  ExtReal scaled(double c) const {
    if (is_finite()) return finite(c * value_);
    if (c == 0) throw Error("ExtReal: 0 * inf is undefined");
    return (c > 0) == is_pos_inf() ? pos_inf() : neg_inf();
  }

  ExtReal exp() const {
    if (is_pos_inf()) return pos_inf();
    if (is_neg_inf()) return finite(0.0);
    return finite(std::exp(value_));
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.tag_ != b.tag_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    return a.as_double() < b.as_double();
  }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a < b || a == b; }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return b <= a; }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
    if (x.is_pos_inf()) return os << "inf";
    if (x.is_neg_inf()) return os << "-inf";
    return os << x.value_;
  }

 private:
  Tag tag_;
  double value_ = 0.0;
};

// (1/(alpha-1)) * logq, the Renyi normalization, sign-correct on both sides of 1.
inline ExtReal renyi_from_log_q(const ExtReal& log_q, double alpha) {
  return log_q.scaled(1.0 / (alpha - 1.0));
}

}  // namespace qdiv
