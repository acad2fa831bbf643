#pragma once

#include <gmpxx.h>

#include <string>

namespace lad {

/// Exact rational scalar. Always canonical: positive denominator,
/// gcd(|num|, den) = 1, zero stored as 0/1.
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(long n, long d);
    explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    /// Parses "a", "-a" or "a/b". Throws Error on malformed input or b = 0.
    static Rat parse(const std::string& text);

    static Rat factorial(unsigned long n);

    bool is_zero() const { return v_ == 0; }
    int sign() const { return sgn(v_); }

    std::string num_string() const { return v_.get_num().get_str(); }
    std::string den_string() const { return v_.get_den().get_str(); }
    std::string to_string() const;

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
    Rat operator/(const Rat& o) const;

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }
    bool operator<(const Rat& o) const { return v_ < o.v_; }
    bool operator<=(const Rat& o) const { return v_ <= o.v_; }
    bool operator>(const Rat& o) const { return v_ > o.v_; }
    bool operator>=(const Rat& o) const { return v_ >= o.v_; }

  private:
    mpq_class v_;
};

} // namespace lad
