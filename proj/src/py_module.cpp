#include <pybind11/pybind11.h>
namespace py = pybind11;
PYBIND11_MODULE(pykoszul, m) { m.doc() = "koszul workbench bindings"; }
