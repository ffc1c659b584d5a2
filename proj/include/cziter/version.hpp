#ifndef CZITER_VERSION_HPP
#define CZITER_VERSION_HPP

namespace cziter {
inline constexpr const char* version_string = "0.3.0";
}

#endif
