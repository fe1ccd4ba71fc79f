#include "rnlab/special.hpp"

namespace rnlab {

template std::complex<double> log_gamma<double>(std::complex<double>);
template double hurwitz_zeta<double>(double, double);
template std::complex<double> hurwitz_zeta<std::complex<double>>(std::complex<double>, double);

}  // namespace rnlab
