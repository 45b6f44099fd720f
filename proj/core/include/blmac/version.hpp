#ifndef BLMAC_VERSION_HPP
#define BLMAC_VERSION_HPP

namespace blmac {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
