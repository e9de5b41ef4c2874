#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vlcdt
{

/// Pass/fail with one line per failure
struct ValidationReport
{
    bool pass = true;
    std::vector<std::string> failures;

    void fail(std::string msg)
    {
        pass = false;
        failures.push_back(std::move(msg));
    }

    void merge(const ValidationReport& o)
    {
        for(const std::string& f : o.failures)
            fail(f);
    }

    void write(std::ostream& os) const
    {
        os << (pass ? "PASS" : "FAIL") << ' ' << failures.size() << '\n';
        for(const std::string& f : failures)
            os << "  " << f << '\n';
    }
};

} // namespace vlcdt
