#pragma once

#include <string>

namespace hetsim {

// The three carriers of the multi-band HetNet: the 2 GHz macro layer and the
// two small-cell layers under study.
enum class Band { macro_2g, small_3g5, small_60g };

inline constexpr const char* to_string(Band band) {
  switch (band) {
    case Band::macro_2g: return "macro_2g";
    case Band::small_3g5: return "small_3g5";
    case Band::small_60g: return "small_60g";
  }
  return "?";
}

Band band_from_string(const std::string& name);

}  // namespace hetsim
