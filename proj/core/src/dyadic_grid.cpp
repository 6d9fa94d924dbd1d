#include "sparsebell/dyadic_grid.hpp"

#include <ostream>
#include <string>

#include "sparsebell/errors.hpp"

namespace sparsebell {

void require_valid(NodeAddress a) {
  if (!is_valid(a)) {
    throw ContractError("invalid dyadic address (" + std::to_string(a.level) + "," +
                        std::to_string(a.index) + ")");
  }
}

NodeAddress parent(NodeAddress a) {
  if (a.level == 0) throw ContractError("the main interval has no parent");
  return {a.level - 1, a.index / 2};
}

DyadicRational relative_measure(NodeAddress a) { return {BigInt(1), a.level}; }

std::ostream& operator<<(std::ostream& os, NodeAddress a) {
  return os << '(' << a.level << ',' << a.index << ')';
}

}  // namespace sparsebell
