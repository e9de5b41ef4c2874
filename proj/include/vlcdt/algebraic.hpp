#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace vlcdt
{

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

enum class Sign : int
{
    Negative = -1,
    Zero = 0,
    Positive = 1
};

inline Sign to_sign(int s)
{
    return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero);
}

inline int sgn(const Rational& q)
{
    return q.sign();
}

inline Sign operator-(Sign s)
{
    return to_sign(-static_cast<int>(s));
}

inline Sign operator*(Sign a, Sign b)
{
    return to_sign(static_cast<int>(a) * static_cast<int>(b));
}

inline const char* to_string(Sign s)
{
    switch(s)
    {
    case Sign::Negative:
        return "Negative";
    case Sign::Zero:
        return "Zero";
    default:
        return "Positive";
    }
}

/// sign of a + b*sqrt(m), m >= 0
inline int sign_sqrt2(const Rational& a, const Rational& b, const Rational& m)
{
    const int sa = sgn(a);
    const int sb = (sgn(m) == 0) ? 0 : sgn(b);
    if(sb == 0)
        return sa;
    if(sa == 0 || sa == sb)
        return sb;
    const Rational diff = a * a - b * b * m;
    return sa * sgn(diff);
}

/// sign of a + b*sqrt(m) + c*sqrt(n), m, n >= 0
inline int sign_sqrt3(
    const Rational& a,
    const Rational& b,
    const Rational& m,
    const Rational& c,
    const Rational& n)
{
    const int sx = sign_sqrt2(a, b, m);
    const int sy = (sgn(n) == 0) ? 0 : sgn(c);
    if(sy == 0)
        return sx;
    if(sx == 0 || sx == sy)
        return sy;
    // |X| vs |Y| with X = a + b sqrt(m), Y = c sqrt(n)
    const Rational p = a * a + b * b * m - c * c * n;
    const Rational q = 2 * a * b;
    return sx * sign_sqrt2(p, q, m);
}

/// Number a + b*sqrt(d) in Q(sqrt(d)) for a fixed d
struct QSqrt
{
    Rational a;
    Rational b;
    Rational d;

    QSqrt() = default;
    QSqrt(Rational a_, Rational b_, Rational d_)
        : a(std::move(a_))
        , b(std::move(b_))
        , d(std::move(d_))
    {}

    static QSqrt rational(const Rational& q, const Rational& d)
    {
        return QSqrt(q, Rational(0), d);
    }

    QSqrt operator+(const QSqrt& o) const
    {
        return QSqrt(a + o.a, b + o.b, d);
    }
    QSqrt operator-(const QSqrt& o) const
    {
        return QSqrt(a - o.a, b - o.b, d);
    }
    QSqrt operator*(const QSqrt& o) const
    {
        return QSqrt(a * o.a + b * o.b * d, a * o.b + b * o.a, d);
    }
    QSqrt operator*(const Rational& q) const
    {
        return QSqrt(a * q, b * q, d);
    }
    QSqrt operator/(const Rational& q) const
    {
        return QSqrt(a / q, b / q, d);
    }
    int sign() const
    {
        return sign_sqrt2(a, b, d);
    }
    double approx() const
    {
        return a.convert_to<double>() +
               b.convert_to<double>() * std::sqrt(d.convert_to<double>());
    }
};

/// Real number alpha + beta*sqrt(disc), typically a root of a rational quadratic
struct QuadRoot
{
    Rational alpha;
    Rational beta;
    Rational disc;

    static QuadRoot rational(const Rational& q)
    {
        return QuadRoot{q, Rational(0), Rational(0)};
    }

    double approx() const
    {
        return alpha.convert_to<double>() +
               beta.convert_to<double>() * std::sqrt(disc.convert_to<double>());
    }
};

inline int compare(const QuadRoot& r, const QuadRoot& s)
{
    return sign_sqrt3(r.alpha - s.alpha, r.beta, r.disc, -s.beta, s.disc);
}

inline int compare(const QuadRoot& r, const Rational& q)
{
    return sign_sqrt2(r.alpha - q, r.beta, r.disc);
}

/// sign of A t^2 + B t + C at t = r
inline int eval_sign(
    const Rational& A,
    const Rational& B,
    const Rational& C,
    const QuadRoot& r)
{
    const Rational& al = r.alpha;
    const Rational& be = r.beta;
    const Rational a = A * (al * al + be * be * r.disc) + B * al + C;
    const Rational b = (2 * A * al + B) * be;
    return sign_sqrt2(a, b, r.disc);
}

/// Roots of A t^2 + B t + C; `high` selects the larger of two roots.
/// Returns false when there is no real root. A linear equation yields its
/// single root for either selector.
inline bool quadratic_root(
    const Rational& A,
    const Rational& B,
    const Rational& C,
    bool high,
    QuadRoot& out)
{
    if(sgn(A) == 0)
    {
        if(sgn(B) == 0)
            return false;
        out = QuadRoot::rational(-C / B);
        return true;
    }
    Rational D = B * B - 4 * A * C;
    if(sgn(D) < 0)
        return false;
    const Rational twoA = 2 * A;
    const int sigma = (high ? 1 : -1) * sgn(A);
    out.alpha = -B / twoA;
    out.beta = Rational(sigma) / twoA;
    out.disc = std::move(D);
    if(sgn(out.disc) == 0)
        out.beta = 0;
    return true;
}

/// Exact decimal / fraction parsing: "-12.5e3", "7/3", "42"
inline Rational parse_rational(const std::string& s)
{
    if(s.empty())
        throw std::invalid_argument("empty number");
    const auto slash = s.find('/');
    if(slash != std::string::npos)
    {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if(sgn(den) == 0)
            throw std::invalid_argument("zero denominator: " + s);
        return num / den;
    }
    std::size_t i = 0;
    bool neg = false;
    if(s[i] == '+' || s[i] == '-')
    {
        neg = s[i] == '-';
        ++i;
    }
    std::string digits;
    long long exp10 = 0;
    bool any = false;
    bool dot = false;
    for(; i < s.size(); ++i)
    {
        const char ch = s[i];
        if(ch >= '0' && ch <= '9')
        {
            digits.push_back(ch);
            any = true;
            if(dot)
                --exp10;
        }
        else if(ch == '.' && !dot)
            dot = true;
        else
            break;
    }
    if(!any)
        throw std::invalid_argument("malformed number: " + s);
    // a leading zero would select octal
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    if(i < s.size())
    {
        if(s[i] != 'e' && s[i] != 'E')
            throw std::invalid_argument("malformed number: " + s);
        ++i;
        const std::string e = s.substr(i);
        if(e.empty())
            throw std::invalid_argument("malformed exponent: " + s);
        std::size_t used = 0;
        long long ev = 0;
        try
        {
            ev = std::stoll(e, &used);
        }
        catch(const std::exception&)
        {
            throw std::invalid_argument("malformed exponent: " + s);
        }
        if(used != e.size() || ev > 10000 || ev < -10000)
            throw std::invalid_argument("malformed exponent: " + s);
        exp10 += ev;
    }
    Integer mant(digits);
    Integer p10 = 1;
    Integer ten = 10;
    for(long long k = 0; k < (exp10 < 0 ? -exp10 : exp10); ++k)
        p10 *= ten;
    Rational q = exp10 >= 0 ? Rational(mant * p10) : Rational(mant, p10);
    return neg ? Rational(-q) : q;
}

/// Exact text form: terminating decimal when possible, otherwise "p/q"
inline std::string format_rational(const Rational& q)
{
    Integer den = boost::multiprecision::denominator(q);
    Integer num = boost::multiprecision::numerator(q);
    int twos = 0;
    int fives = 0;
    Integer d = den;
    while(d % 2 == 0)
    {
        d /= 2;
        ++twos;
    }
    while(d % 5 == 0)
    {
        d /= 5;
        ++fives;
    }
    if(d != 1)
        return num.str() + "/" + den.str();
    const int k = std::max(twos, fives);
    if(k == 0)
        return num.str();
    Integer scale = 1;
    for(int i = 0; i < k; ++i)
        scale *= 10;
    Integer scaled = num * (scale / den);
    const bool neg = scaled < 0;
    if(neg)
        scaled = -scaled;
    std::string digits = scaled.str();
    if(static_cast<int>(digits.size()) <= k)
        digits = std::string(k + 1 - digits.size(), '0') + digits;
    std::string out = digits.substr(0, digits.size() - k) + "." +
                      digits.substr(digits.size() - k);
    while(out.back() == '0')
        out.pop_back();
    if(out.back() == '.')
        out.pop_back();
    return neg ? "-" + out : out;
}

} // namespace vlcdt
