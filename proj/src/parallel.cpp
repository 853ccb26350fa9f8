#include "trirank/parallel.hpp"

#include "trirank/errors.hpp"

#include <cstdlib>
#include <string>

namespace trirank {

std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TRIRANK_WORKERS"); env && *env) {
        try {
            const long v = std::stol(env);
            require(v > 0, "TRIRANK_WORKERS must be a positive integer");
            return static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
            throw ValidationError("TRIRANK_WORKERS must be a positive integer");
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace trirank
