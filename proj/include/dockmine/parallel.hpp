#pragma once

#include <functional>
#include <vector>

namespace dockmine {

// Logical CPU count (the --jobs default).
int default_jobs();

// Runs fn(i) for i in [0, n). jobs <= 1 is a plain serial loop (the
// reference path); jobs > 1 uses an OpenMP parallel-for with dynamic
// scheduling. fn must write only to its own slot of any shared output.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace dockmine
