#pragma once

#include "algebraic.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vlcdt
{

struct Point
{
    Rational x;
    Rational y;
    double fx = 0;
    double fy = 0;

    Point() = default;
    Point(Rational x_, Rational y_)
        : x(std::move(x_))
        , y(std::move(y_))
        , fx(x.convert_to<double>())
        , fy(y.convert_to<double>())
    {}
    Point(const std::string& sx, const std::string& sy)
        : Point(parse_rational(sx), parse_rational(sy))
    {}
    static Point from_double(double x, double y)
    {
        return Point(Rational(x), Rational(y));
    }

    friend bool operator==(const Point& p, const Point& q)
    {
        return p.x == q.x && p.y == q.y;
    }
    friend bool operator!=(const Point& p, const Point& q)
    {
        return !(p == q);
    }
    friend bool operator<(const Point& p, const Point& q)
    {
        return p.x < q.x || (p.x == q.x && p.y < q.y);
    }
};

struct SegmentSite
{
    Point a;
    Point b;
};

enum class TangencySelector
{
    LowTangency,
    HighTangency
};

struct NoTangentCircle : std::runtime_error
{
    NoTangentCircle()
        : std::runtime_error("NoTangentCircle")
    {}
};

struct PreconditionError : std::logic_error
{
    using std::logic_error::logic_error;
};

namespace detail
{

inline Sign orient2d_exact(const Point& a, const Point& b, const Point& c)
{
    const Rational det = (a.x - c.x) * (b.y - c.y) - (a.y - c.y) * (b.x - c.x);
    return to_sign(sgn(det));
}

inline Sign incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d)
{
    const Rational adx = a.x - d.x, ady = a.y - d.y;
    const Rational bdx = b.x - d.x, bdy = b.y - d.y;
    const Rational cdx = c.x - d.x, cdy = c.y - d.y;
    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;
    const Rational det = alift * (bdx * cdy - bdy * cdx) +
                         blift * (cdx * ady - cdy * adx) +
                         clift * (adx * bdy - ady * bdx);
    return to_sign(sgn(det));
}

// Error bounds cover the rounding of the rational inputs to double as well.
constexpr double orient_errbound = 4e-15;
constexpr double incircle_errbound = 1e-13;

} // namespace detail

inline Sign orient2d(const Point& a, const Point& b, const Point& c)
{
    const double acx = a.fx - c.fx, bcx = b.fx - c.fx;
    const double acy = a.fy - c.fy, bcy = b.fy - c.fy;
    const double det = acx * bcy - acy * bcx;
    const double perm = (std::abs(a.fx) + std::abs(c.fx)) * (std::abs(b.fy) + std::abs(c.fy)) +
                        (std::abs(a.fy) + std::abs(c.fy)) * (std::abs(b.fx) + std::abs(c.fx));
    const double bound = detail::orient_errbound * perm;
    if(det > bound)
        return Sign::Positive;
    if(-det > bound)
        return Sign::Negative;
    return detail::orient2d_exact(a, b, c);
}

/// Positive iff d lies strictly inside the circle through a, b, c (CCW)
inline Sign incircle_raw(const Point& a, const Point& b, const Point& c, const Point& d)
{
    const double adx = a.fx - d.fx, ady = a.fy - d.fy;
    const double bdx = b.fx - d.fx, bdy = b.fy - d.fy;
    const double cdx = c.fx - d.fx, cdy = c.fy - d.fy;
    const double det = (adx * adx + ady * ady) * (bdx * cdy - bdy * cdx) +
                       (bdx * bdx + bdy * bdy) * (cdx * ady - cdy * adx) +
                       (cdx * cdx + cdy * cdy) * (adx * bdy - ady * bdx);
    const double ax = std::abs(a.fx) + std::abs(d.fx), ay = std::abs(a.fy) + std::abs(d.fy);
    const double bx = std::abs(b.fx) + std::abs(d.fx), by = std::abs(b.fy) + std::abs(d.fy);
    const double cx = std::abs(c.fx) + std::abs(d.fx), cy = std::abs(c.fy) + std::abs(d.fy);
    const double perm = (ax * ax + ay * ay) * (bx * cy + by * cx) +
                        (bx * bx + by * by) * (cx * ay + cy * ax) +
                        (cx * cx + cy * cy) * (ax * by + ay * bx);
    const double bound = detail::incircle_errbound * perm;
    if(det > bound)
        return Sign::Positive;
    if(-det > bound)
        return Sign::Negative;
    return detail::incircle_exact(a, b, c, d);
}

/// incircle_raw with cocircular ties broken by ranks: the lifted point of
/// smaller rank is lowered by a larger infinitesimal, so a cocircular group
/// is triangulated as a fan from its smallest rank. Zero only when d
/// coincides with a, b or c, or a, b, c are collinear.
inline Sign incircle_ranked(
    const Point& a,
    const Point& b,
    const Point& c,
    const Point& d,
    const std::array<int, 4>& rank)
{
    const Sign s = incircle_raw(a, b, c, d);
    if(s != Sign::Zero || d == a || d == b || d == c)
        return s;
    const Sign o = orient2d(a, b, c);
    if(o == Sign::Zero)
        return Sign::Zero;
    const int m = static_cast<int>(std::min_element(rank.begin(), rank.end()) - rank.begin());
    bool inside = true;
    if(m == 0)
        inside = orient2d(d, b, c) != o;
    else if(m == 1)
        inside = orient2d(a, d, c) != o;
    else if(m == 2)
        inside = orient2d(a, b, d) != o;
    return inside ? o : -o;
}

inline Sign incircle(const Point& a, const Point& b, const Point& c, const Point& d)
{
    if(orient2d(a, b, c) != Sign::Positive)
        throw PreconditionError("incircle: (a,b,c) must be counterclockwise");
    return incircle_raw(a, b, c, d);
}

/// Point in the frame of a directed segment: X along a->b, Y across,
/// both scaled by |b-a|.
struct FramePoint
{
    Rational X;
    Rational Y;
};

class SegmentFrame
{
public:
    SegmentFrame() = default;
    explicit SegmentFrame(const SegmentSite& s)
        : m_a(s.a)
        , m_dx(s.b.x - s.a.x)
        , m_dy(s.b.y - s.a.y)
        , m_len2(m_dx * m_dx + m_dy * m_dy)
    {
        if(sgn(m_len2) == 0)
            throw PreconditionError("degenerate segment");
    }

    FramePoint map(const Point& p) const
    {
        const Rational px = p.x - m_a.x, py = p.y - m_a.y;
        return FramePoint{m_dx * px + m_dy * py, m_dx * py - m_dy * px};
    }

    Point unmap(const Rational& X, const Rational& Y) const
    {
        return Point(m_a.x + (X * m_dx - Y * m_dy) / m_len2, m_a.y + (X * m_dy + Y * m_dx) / m_len2);
    }

    void unmap_approx(double X, double Y, double& x, double& y) const
    {
        const double dx = m_dx.convert_to<double>(), dy = m_dy.convert_to<double>();
        const double l2 = m_len2.convert_to<double>();
        x = m_a.fx + (X * dx - Y * dy) / l2;
        y = m_a.fy + (X * dy + Y * dx) / l2;
    }

    /// Frame abscissa of the segment end b
    const Rational& length2() const
    {
        return m_len2;
    }

private:
    Point m_a;
    Rational m_dx;
    Rational m_dy;
    Rational m_len2;
};

namespace detail
{

/// Coefficients of Yv((t-Xu)^2+Yu^2) - Yu((t-Xv)^2+Yv^2), which has the sign of
/// h_u(t) - h_v(t) for Yu, Yv > 0.
inline void parabola_difference(
    const FramePoint& u,
    const FramePoint& v,
    Rational& A,
    Rational& B,
    Rational& C)
{
    A = v.Y - u.Y;
    B = -2 * (v.Y * u.X - u.Y * v.X);
    C = v.Y * u.X * u.X - u.Y * v.X * v.X + u.Y * v.Y * (u.Y - v.Y);
}

} // namespace detail

/// Tangency abscissa t where the parabola of u (left) meets that of v
/// (right), i.e. where h_u - h_v changes from negative to positive.
/// Requires u.Y, v.Y > 0. Returns false if no such crossing exists.
inline bool breakpoint(const FramePoint& u, const FramePoint& v, QuadRoot& t)
{
    Rational A, B, C;
    detail::parabola_difference(u, v, A, B, C);
    if(sgn(A) == 0)
    {
        if(sgn(B) <= 0)
            return false;
        t = QuadRoot::rational(-C / B);
        return true;
    }
    if(!quadratic_root(A, B, C, sgn(A) > 0, t))
        return false;
    return sgn(t.disc) != 0;
}

/// Sign of "c strictly inside the circle tangent to Y = 0 at abscissa t and
/// passing through ref" (ref.Y > 0; c may lie anywhere).
inline Sign inside_tangent_circle(const FramePoint& ref, const QuadRoot& t, const FramePoint& c)
{
    const Rational A = ref.Y - c.Y;
    const Rational B = 2 * (c.Y * ref.X - ref.Y * c.X);
    const Rational C = ref.Y * c.X * c.X + ref.Y * c.Y * c.Y - c.Y * ref.X * ref.X - c.Y * ref.Y * ref.Y;
    return to_sign(-eval_sign(A, B, C, t));
}

inline Sign tangent_incircle(
    const SegmentSite& s,
    const Point& a,
    const Point& b,
    TangencySelector which,
    const Point& c)
{
    const SegmentFrame frame(s);
    FramePoint fa = frame.map(a), fb = frame.map(b), fc = frame.map(c);
    if(sgn(fa.Y) == 0 || sgn(fb.Y) == 0)
        throw NoTangentCircle();
    if(sgn(fa.Y) != sgn(fb.Y))
        throw PreconditionError("tangent_incircle: a and b on opposite sides of the segment line");
    if(a == b)
        throw PreconditionError("tangent_incircle: a == b");
    if(sgn(fa.Y) < 0)
    {
        fa.Y = -fa.Y;
        fb.Y = -fb.Y;
        fc.Y = -fc.Y;
    }
    Rational A, B, C;
    detail::parabola_difference(fa, fb, A, B, C);
    QuadRoot t;
    if(!quadratic_root(A, B, C, which == TangencySelector::HighTangency, t))
        throw NoTangentCircle();
    return inside_tangent_circle(fa, t, fc);
}

} // namespace vlcdt
