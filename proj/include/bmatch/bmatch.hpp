// Copyright 2026 The bmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BMATCH_BMATCH_BMATCH_HPP_
#define BMATCH_BMATCH_BMATCH_HPP_

#include "bmatch/blossom.hpp"
#include "bmatch/error.hpp"
#include "bmatch/gadget.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/graph_io.hpp"
#include "bmatch/kernel.hpp"
#include "bmatch/merge_flow.hpp"
#include "bmatch/mu_profile.hpp"
#include "bmatch/oracle.hpp"
#include "bmatch/result_io.hpp"
#include "bmatch/solver.hpp"
#include "bmatch/split_decomp.hpp"
#include "bmatch/testkit.hpp"
#include "bmatch/weight_store.hpp"
#include "bmatch/weighted_matching.hpp"

#endif  // BMATCH_BMATCH_BMATCH_HPP_
