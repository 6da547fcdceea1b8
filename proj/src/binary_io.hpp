#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "diracbs/types.hpp"

namespace diracbs::detail {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <typename T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ValidationError("truncated binary file");
  return to_little(v);  // byte swap is an involution
}

inline void put_complex(std::ostream& os, cplx z) {
  put(os, z.real());
  put(os, z.imag());
}

inline cplx get_complex(std::istream& is) {
  const double re = get<double>(is);
  const double im = get<double>(is);
  return {re, im};
}

} // namespace diracbs::detail
