#include "rslab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rslab {

int resolve_threads(int requested) {
    if (const char* env = std::getenv("RSLAB_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
            // fall through to the explicit request
        }
    }
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace rslab
