#ifndef RBV_RAMBUDGET_HPP
#define RBV_RAMBUDGET_HPP

#include <string>

#include "rbv/reservoir.hpp"

namespace rbv {

struct RamSizes {
  int float_bytes = 4;
  int int_bytes = 2;
};

struct RamOverheads {
  int serial = 310;
  int misc_globals = 6;
  int stack_reserve = 1012;
};

struct RamBudget {
  long input_buffer = 0;    // array Y
  long globals = 0;         // Sh, Sh2 arrays plus misc scalars
  long serial = 0;          // serial subsystem
  long library_w1 = 0;
  long library_w2 = 0;
  long library_coeffs = 0;  // minS, maxS, meanS
  long library = 0;
  long stack_reserve = 0;
  long total = 0;
};

RamBudget ram_budget(const Topology& t, const RamSizes& sizes = {},
                     const RamOverheads& overheads = {});

std::string format_ram_budget(const RamBudget& b);

}  // namespace rbv

#endif
