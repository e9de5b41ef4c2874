#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace vlcdt
{

/// mt19937_64 with a bounded draw that does not depend on the standard
/// library's distribution implementation.
class Rng
{
public:
    explicit Rng(std::uint64_t seed)
        : m_gen(seed)
    {}

    std::uint64_t next()
    {
        return m_gen();
    }

    /// uniform in [0, n)
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do
            r = m_gen();
        while(r >= limit);
        return r % n;
    }

    /// uniform in [0, 1)
    double unit()
    {
        return static_cast<double>(m_gen() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v, std::size_t first = 0)
    {
        for(std::size_t i = v.size(); i > first + 1; --i)
        {
            const std::size_t j = first + below(i - first);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 m_gen;
};

} // namespace vlcdt
