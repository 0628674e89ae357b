#include "tpw/fixtures.hpp"

#include <stdexcept>

#include "tpw/tensorcalc.hpp"

namespace tpw {

Model make_fixture(const std::string& name) {
    const CalibrationConstants& cal = default_calibration();
    if (name == "M1") {
        Bivector pi(2);
        pi.set(1, 2, Expr::integer(1));
        return Model(2, pi, KForm(2, 3), cal);
    }
    if (name == "M2") {
        Bivector pi(3);
        pi.set(1, 2, Expr::x(3));
        pi.set(2, 3, Expr::x(1));
        pi.set(3, 1, Expr::x(2));
        return Model(3, pi, KForm(3, 3), cal);
    }
    if (name == "M3") {
        Bivector pi(4);
        pi.set(1, 2, Expr::integer(1));
        pi.set(3, 4, Expr::integer(1) / (Expr::integer(1) + Expr::x(1)));
        KForm phi(4, 3);
        phi.add_term({1, 3, 4}, Expr::integer(cal.s_inv));
        return Model(4, pi, phi, cal);
    }
    if (name == "M4") {
        Bivector pi(4);
        pi.set(1, 2, Expr::integer(1));
        pi.set(3, 4, Expr::integer(1));
        KForm phi(4, 3);
        phi.add_term({1, 2, 3}, Expr::integer(1));
        return Model(4, pi, phi, cal);
    }
    throw std::invalid_argument("unknown fixture '" + name + "'");
}

std::vector<std::string> fixture_names() { return {"M1", "M2", "M3", "M4"}; }

} // namespace tpw
