// Copyright 2026 The StereoQA Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STEREOQA_TESTS_STATS_ORACLE_CASES_H_
#define STEREOQA_TESTS_STATS_ORACLE_CASES_H_

#include <cstddef>
#include <vector>

// Frozen output of tests/oracles/stats_oracle.py (50-digit arithmetic).
namespace stereoqa::oracle {

struct PearsonCase {
  std::vector<double> x;
  std::vector<double> y;
  double r;
};

struct PoolCase {
  std::vector<double> rs;
  std::vector<std::size_t> ns;  // empty: unweighted
  double pooled;
};

struct CiCase {
  double r;
  std::size_t n;
  double upper;
  double lower;
};

inline const std::vector<PearsonCase>& PearsonCases() {
  static const std::vector<PearsonCase> cases = {
      {{1, 2, 3, 4}, {1, 2, 3, 10}, 0.8854377448471462129596902},
      {{1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}, 0.8},
      {{0.5, 1.5, -2.0, 3.25, 0.0, 7.0},
       {1.0, 2.0, -1.0, 4.0, 0.5, 5.5},
       0.9812202434407012466968758},
      {{10, 20, 30, 40, 50, 60, 70},
       {72, 65, 60, 41, 38, 22, 30},
       -0.9539663803334694474115509},
      {{1000.0, 1001.0, 1002.0, 1004.0}, {3, 1, 4, 1.5}, -0.2303502213799585614961889},
      {{-3, -1, 0, 2, 9}, {9, 1, 0, 4, 81}, 0.8956798417244291533129509},
  };
  return cases;
}

inline const std::vector<PoolCase>& PoolCases() {
  static const std::vector<PoolCase> cases = {
      {{0.6, 0.9}, {}, 0.7941920563444974257185714},
      {{0.2, 0.5, 0.8}, {}, 0.5489545278901186276278406},
      {{-0.3, 0.7}, {}, 0.2718778669748901069867512},
      {{0.95, 0.99, 0.85, 0.6}, {}, 0.9227055615231587377530375},
      {{0.6, 0.9}, {10, 40}, 0.8736457967094753583841258},
      {{0.44, 0.81, 0.93}, {24, 24, 48}, 0.846540482103754565012042},
  };
  return cases;
}

inline const std::vector<CiCase>& CiCases() {
  static const std::vector<CiCase> cases = {
      {0.9, 50, 0.04229208742238286728958057, 0.07056465469260178784729784},
      {0.0, 403, 0.09768746989410341613350595, 0.09768746989410341613350595},
      {0.5, 10, 0.3591570496895745401428194, 0.689196996013965739147378},
      {-0.7, 30, 0.2457055101987873649360883, 0.1467349097724196310767334},
      {0.99, 1000, 0.001162346761002311478667688, 0.001314352378904977082325769},
      {0.3, 4, 0.6788585355517601512605861, 1.228923513649083384753614},
  };
  return cases;
}

}  // namespace stereoqa::oracle

#endif  // STEREOQA_TESTS_STATS_ORACLE_CASES_H_
