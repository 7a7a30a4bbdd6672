//
// Copyright 2026 The MLDP Authors.
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
//

#ifndef MLDP_MLDP_HPP_
#define MLDP_MLDP_HPP_

#include "mldp/bench.hpp"
#include "mldp/budget.hpp"
#include "mldp/errors.hpp"
#include "mldp/histogram.hpp"
#include "mldp/learning.hpp"
#include "mldp/mechanisms.hpp"
#include "mldp/pipeline.hpp"
#include "mldp/seeds.hpp"
#include "mldp/workload.hpp"

#endif  // MLDP_MLDP_HPP_
