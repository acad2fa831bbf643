#include "lad/rat.hpp"

#include "lad/errors.hpp"

namespace lad {

Rat::Rat(long n, long d) : v_(n, d) {
    if (d == 0)
        fail(ErrorKind::ShapeError, "rational with zero denominator");
    v_.canonicalize();
}

Rat Rat::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            mpq_class v{mpz_class(text)};
            return Rat(v);
        }
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        if (den != 0) {
            mpq_class v(num, den);
            v.canonicalize();
            return Rat(v);
        }
    } catch (const std::invalid_argument&) {
        // fall through to the failure below
    }
    fail(ErrorKind::ShapeError, "malformed rational literal '" + text + "'");
}

Rat Rat::factorial(unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rat(mpq_class(f));
}

Rat Rat::operator/(const Rat& o) const {
    if (o.is_zero())
        fail(ErrorKind::ShapeError, "rational division by zero");
    return Rat(mpq_class(v_ / o.v_));
}

std::string Rat::to_string() const {
    if (v_.get_den() == 1)
        return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

} // namespace lad
