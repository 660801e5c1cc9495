#ifndef REGEN_RATIONAL_HPP
#define REGEN_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace regen {

// Exact rational arithmetic for everything on a proof path. mpq_class
// keeps values reduced with positive denominator once canonicalized;
// make_rat and parse_rat are the only construction points used here.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Wire format is "p/q" reduced with q > 0; a bare "p" is accepted on
// input and means p/1.
inline Rat parse_rat(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::string t = text;
    if (t.find('/') == std::string::npos) t += "/1";
    Rat q;
    if (q.set_str(t, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + text);
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
}

inline std::string format_rat(const Rat& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace regen

#endif
