// placeholder until the binding surface lands
#include <pybind11/pybind11.h>
PYBIND11_MODULE(_whsim, m) { m.doc() = "weight-hybrid receiver"; }
