#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace dgcat {

/* Exact scalars. All arithmetic in the library is over Q; nothing is ever
 * rounded. GMP keeps numerators/denominators canonical. */
using Rational = mpq_class;
using Integer = mpz_class;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline Rational rat(long num, long den = 1)
{
    if (den == 0)
        throw Error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/* Parses "3", "-3", "3/4", "-3/4". */
inline Rational parse_rational(const std::string& s)
{
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw Error("cannot parse rational: '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0)
        throw Error("rational with zero denominator: '" + s + "'");
    return q;
}

inline std::string to_string(const Rational& q)
{
    return q.get_str();
}

}  // namespace dgcat
