#pragma once

#include <cstdint>

#include "perispace/metrics.hpp"

namespace perispace::testing {

struct MetricFixture {
  std::uint64_t tp, fp, fn, tn, uo, uf;
  double f1, kappa;
  ConfusionCounts counts() const { return {tp, fp, fn, tn, uo, uf}; }
};

// Exact rational evaluation in tests/oracles/derive.py.
inline const MetricFixture kMetricFixtures[] = {
    {40, 5, 5, 40, 0, 10, 0.8, 0.6363636363636364},
    {2, 1, 1, 0, 2, 0, 0.5, -0.2},
    {100, 0, 0, 0, 0, 0, 1.0, 1.0},
    {0, 0, 0, 100, 0, 0, 1.0, 1.0},
    {0, 0, 0, 0, 30, 70, 0.0, 0.0},
    {0, 0, 0, 0, 0, 50, 0.0, 0.0},
    {50, 50, 0, 0, 0, 0, 0.6666666666666666, 0.0},
    {25, 25, 25, 25, 0, 0, 0.5, 0.0},
    {0, 10, 10, 0, 0, 0, 0.0, -1.0},
    {10, 0, 0, 10, 0, 0, 1.0, 1.0},
    {1, 0, 0, 0, 0, 0, 1.0, 1.0},
    {0, 1, 0, 0, 0, 0, 0.0, 0.0},
    {0, 0, 1, 0, 0, 0, 0.0, 0.0},
    {0, 0, 0, 0, 1, 0, 0.0, 0.0},
    {3, 7, 11, 13, 17, 19, 0.1, -0.034482758620689655},
    {350, 9650, 0, 0, 0, 0, 0.06763285024154589, 0.0},
    {67, 95, 40, 4000, 309, 7363, 0.016874449061831005, 0.02043496680543403},
    {123456, 7890, 1234, 987654, 4321, 56789, 0.7785436360540571, 0.7545171826470838},
    {0, 0, 5, 5, 0, 0, 0.0, 0.0},
    {5, 0, 0, 0, 0, 5, 0.6666666666666666, 0.3333333333333333},
    {1, 2, 3, 4, 5, 6, 0.1111111111111111, -0.01818181818181818},
    {1000, 1, 1, 1000, 1, 1, 0.998003992015968, 0.996011964107677},
};

}  // namespace perispace::testing
