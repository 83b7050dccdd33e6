#pragma once

#include <stdexcept>
#include <string>

namespace rslab {

// Requested table size exceeds what the fixed-width integer arithmetic can
// hold, or an overflow was detected mid-build.
class limit_error : public std::runtime_error {
public:
    explicit limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Cache file is unreadable or fails its magic/length validation.  Kept
// distinct from build failures so callers can fall back to a rebuild.
class cache_error : public std::runtime_error {
public:
    explicit cache_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rslab
