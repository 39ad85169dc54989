#include "combstruct/numeric.hpp"

namespace combstruct {

BigRational rational_from_double(double v) {
  if (!std::isfinite(v)) {
    throw DomainError("cannot convert non-finite value to a rational");
  }
  BigRational q(v);  // mpq_set_d is exact
  q.canonicalize();
  return q;
}

double to_double(const BigRational& q) {
  if (q == 0) return 0.0;
  const double l = log_of(q);
  const double sign = sgn(q) < 0 ? -1.0 : 1.0;
  if (l > -700.0 && l < 700.0) return q.get_d();
  return sign * std::exp(l);
}

double log_of(const BigInt& z) {
  if (sgn(z) == 0) return kNegInf;
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

double log_of(const BigRational& q) {
  if (sgn(q) == 0) return kNegInf;
  return log_of(BigInt(q.get_num())) - log_of(BigInt(q.get_den()));
}

BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigRational rising_factorial(const BigRational& base, unsigned long k) {
  BigRational r(1);
  for (unsigned long t = 0; t < k; ++t) r *= base + BigRational(t);
  return r;
}

BigRational falling_factorial(const BigRational& base, unsigned long k) {
  BigRational r(1);
  for (unsigned long t = 0; t < k; ++t) r *= base - BigRational(t);
  return r;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigRational pow_rational(const BigRational& base, unsigned long k) {
  BigInt num;
  BigInt den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), k);
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

double log_rising(double y, long k) {
  if (k <= 0) return 0.0;
  if (k < 64) {
    double s = 0.0;
    for (long t = 0; t < k; ++t) s += std::log(y + static_cast<double>(t));
    return s;
  }
  return std::lgamma(y + static_cast<double>(k)) - std::lgamma(y);
}

double log_falling(double y, long k) {
  double s = 0.0;
  for (long t = 0; t < k; ++t) s += std::log(std::fabs(y - static_cast<double>(t)));
  return s;
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

int mobius(unsigned long n) {
  if (n == 1) return 1;
  int sign = 1;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

}  // namespace combstruct
