#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace thompson {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational pow2(long k)
{
    Rational r(1);
    if (k >= 0)
        mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(k));
    else
        mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-k));
    return r;
}

inline bool is_power_of_two(const Integer& n)
{
    return n > 0 && mpz_popcount(n.get_mpz_t()) == 1;
}

inline bool is_dyadic(const Rational& q) { return is_power_of_two(q.get_den()); }

/* exponent e with 2^e = den, for a dyadic q */
inline long dyadic_exponent(const Rational& q)
{
    return static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2)) - 1;
}

/* k such that q = 2^k, if any */
inline std::optional<long> log2_exact(const Rational& q)
{
    if (q <= 0 || !is_power_of_two(q.get_num()) || !is_power_of_two(q.get_den()))
        return std::nullopt;
    long a = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) - 1;
    long b = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2)) - 1;
    return a - b;
}

/* k with 2^k <= q < 2^(k+1), q > 0 */
inline long floor_log2(const Rational& q)
{
    if (q <= 0)
        throw std::domain_error("floor_log2 of a non-positive number");
    long a = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) - 1;
    long b = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2)) - 1;
    long k = a - b;
    if (q < pow2(k))
        --k;
    else if (q >= pow2(k + 1))
        ++k;
    return k;
}

inline Integer floor_q(const Rational& q)
{
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Rational frac_q(const Rational& q) { return q - Rational(floor_q(q)); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(const std::string& s)
{
    Rational r;
    if (s.empty() || r.set_str(s, 10) != 0)
        throw std::invalid_argument("not a rational number: '" + s + "'");
    r.canonicalize();
    if (r.get_den() == 0)
        throw std::invalid_argument("zero denominator: '" + s + "'");
    return r;
}

/* A number of the form numerator / 2^exponent with numerator odd (or zero). */
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long v) : num_(v) {}
    Dyadic(Integer num, long exp) : num_(std::move(num)), exp_(exp) { normalize(); }
    explicit Dyadic(const Rational& q)
    {
        if (!is_dyadic(q))
            throw std::domain_error("not a dyadic rational: " + q.get_str());
        num_ = q.get_num();
        exp_ = dyadic_exponent(q);
    }

    const Integer& numerator() const { return num_; }
    long exponent() const { return exp_; }
    Rational value() const
    {
        Rational r(num_);
        r /= pow2(exp_);
        return r;
    }
    operator Rational() const { return value(); }

    friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.num_ == b.num_; }
    friend bool operator<(const Dyadic& a, const Dyadic& b) { return a.value() < b.value(); }
    std::string str() const { return value().get_str(); }

private:
    void normalize()
    {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        if (exp_ < 0) {
            mpz_mul_2exp(num_.get_mpz_t(), num_.get_mpz_t(), static_cast<mp_bitcnt_t>(-exp_));
            exp_ = 0;
            return;
        }
        mp_bitcnt_t tz = mpz_scan1(num_.get_mpz_t(), 0);
        long drop = std::min<long>(static_cast<long>(tz), exp_);
        if (drop > 0) {
            mpz_fdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
            exp_ -= drop;
        }
    }

    Integer num_{0};
    long exp_ = 0;
};

} // namespace thompson
