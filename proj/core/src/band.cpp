#include "hetsim/band.hpp"

#include <stdexcept>

namespace hetsim {

Band band_from_string(const std::string& name) {
  if (name == "macro_2g") return Band::macro_2g;
  if (name == "small_3g5") return Band::small_3g5;
  if (name == "small_60g") return Band::small_60g;
  throw std::invalid_argument("unknown band: " + name);
}

}  // namespace hetsim
