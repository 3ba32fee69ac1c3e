#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace gsw {

// All recoverable failures (parse errors, bad configs, simulation blowups)
// are reported as gsw::Error. The CLI turns them into a single
// machine-readable line on stderr and a nonzero exit code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {
template <class... Parts>
std::string cat(const Parts&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    return os.str();
}
}  // namespace detail

template <class... Parts>
[[noreturn]] void fail(const Parts&... parts) {
    throw Error(detail::cat(parts...));
}

template <class... Parts>
void require(bool condition, const Parts&... parts) {
    if (!condition) fail(parts...);
}

}  // namespace gsw
