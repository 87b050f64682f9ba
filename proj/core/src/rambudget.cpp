#include "rbv/rambudget.hpp"

#include <sstream>
#include <stdexcept>

namespace rbv {

RamBudget ram_budget(const Topology& t, const RamSizes& sizes, const RamOverheads& overheads) {
  validate(t);
  if (sizes.float_bytes <= 0 || sizes.int_bytes <= 0)
    throw std::invalid_argument("ram_budget: type sizes must be positive");
  const long S = t.s, P = t.p, M = t.m, N = t.n;
  const long fb = sizes.float_bytes, ib = sizes.int_bytes;

  RamBudget b;
  b.input_buffer = (S + 1) * fb;
  b.globals = (P + 1) * fb + (M + 1) * fb + overheads.misc_globals;
  b.serial = overheads.serial;
  b.library_w1 = (P + 1) * (M + 1) * ib;
  b.library_w2 = (M + 1) * (N + 1) * ib;
  b.library_coeffs = 3 * P * ib;
  b.library = b.library_w1 + b.library_w2 + b.library_coeffs;
  b.stack_reserve = overheads.stack_reserve;
  b.total = b.input_buffer + b.globals + b.serial + b.library + b.stack_reserve;
  return b;
}

std::string format_ram_budget(const RamBudget& b) {
  std::ostringstream os;
  os << "input buffer Y      " << b.input_buffer << " bytes\n"
     << "global variables    " << b.globals << " bytes\n"
     << "serial subsystem    " << b.serial << " bytes\n"
     << "library constants   " << b.library << " bytes"
     << " (W1 " << b.library_w1 << ", W2 " << b.library_w2 << ", coeffs " << b.library_coeffs
     << ")\n"
     << "stack reserve       " << b.stack_reserve << " bytes\n"
     << "total               " << b.total << " bytes\n";
  return os.str();
}

}  // namespace rbv
