#ifndef OBPROJ_VERSION_HPP
#define OBPROJ_VERSION_HPP

namespace obproj {
inline constexpr const char* kVersion = "1.0.0";
}

#endif  // OBPROJ_VERSION_HPP
