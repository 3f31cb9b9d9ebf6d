#pragma once

// Index-parallel loop used by the grid evaluators and the sampling harnesses. Each
// iteration writes only its own output slot, so the serial and OpenMP paths produce
// identical results; the first exception thrown by any iteration is rethrown.

#include <exception>
#include <mutex>
#include <utility>

namespace subgeom {

enum class Exec { Serial, Parallel };

template <class F>
void for_each_index(int count, bool parallel, F&& body) {
    if (!parallel) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr first;
    int first_index = count;
    std::mutex guard;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(guard);
            if (i < first_index) {
                first_index = i;
                first = std::current_exception();
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

template <class F>
void for_each_index(int count, Exec exec, F&& body) {
    for_each_index(count, exec == Exec::Parallel, std::forward<F>(body));
}

}  // namespace subgeom
