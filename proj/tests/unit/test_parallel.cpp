#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "decouple/parallel.hpp"

using namespace decouple;

TEST(Parallel, VisitsEveryIndexOnce) {
  for (int threads : {1, 2, 7}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Parallel, EmptyRangeIsFine) {
  std::atomic<int> calls{0};
  parallel_for(0, 4, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls.load(), 0);
}

TEST(Parallel, RethrowsAfterJoin) {
  std::atomic<int> calls{0};
  EXPECT_THROW(parallel_for(100, 3,
                            [&](std::size_t i) {
                              ++calls;
                              if (i == 17) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  EXPECT_GE(calls.load(), 1);
}

TEST(Parallel, DefaultThreadCountHonoursEnvironment) {
  ::setenv("DECOUPLE_SIM_THREADS", "3", 1);
  EXPECT_EQ(default_thread_count(), 3);
  ::unsetenv("DECOUPLE_SIM_THREADS");
  EXPECT_GE(default_thread_count(), 1);
}
