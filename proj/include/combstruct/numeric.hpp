#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace combstruct {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline constexpr double kEulerGamma = 0.5772156649015329;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Invalid argument or parameter outside the domain of an operation
/// (e.g. a multiset tilt with theta * x >= 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numeric guard tripped: acceptance underflow, signed-recursion
/// cancellation, quadrature or root-finding failure.
class NumericGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact conversion; every finite double is a dyadic rational.
BigRational rational_from_double(double v);

double to_double(const BigRational& q);

/// Natural log of a positive big integer or rational, without overflow.
double log_of(const BigInt& z);
double log_of(const BigRational& q);

BigInt factorial(unsigned long n);
BigRational rising_factorial(const BigRational& base, unsigned long k);
BigRational falling_factorial(const BigRational& base, unsigned long k);
BigInt binomial(unsigned long n, unsigned long k);
BigRational pow_rational(const BigRational& base, unsigned long k);

/// log(y (y+1) ... (y+k-1)) for real y > 0.
double log_rising(double y, long k);
/// log |y (y-1) ... (y-k+1)|; caller checks sign / vanishing.
double log_falling(double y, long k);

/// log(exp(a) + exp(b)) with -inf handled.
double log_add(double a, double b);

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Mobius function by trial division.
int mobius(unsigned long n);

}  // namespace combstruct
