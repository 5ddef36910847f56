#ifndef FDMAC_TYPES_HPP_
#define FDMAC_TYPES_HPP_

#include <cstdint>

namespace fdmac {

using NodeId = uint8_t;
using MicroSec = uint64_t;

}  // namespace fdmac

#endif  // FDMAC_TYPES_HPP_
