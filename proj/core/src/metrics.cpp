#include "lakee/metrics.hpp"

namespace lakee::metrics {

OpCounters& counters() {
  thread_local OpCounters local;
  return local;
}

void reset() { counters() = OpCounters{}; }

}  // namespace lakee::metrics
