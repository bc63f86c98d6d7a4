// Copyright 2026 The dpkemeny Authors
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

#pragma once

#include "dpkemeny/base_rankers.hpp"
#include "dpkemeny/central_dp.hpp"
#include "dpkemeny/errors.hpp"
#include "dpkemeny/experiment.hpp"
#include "dpkemeny/local_dp.hpp"
#include "dpkemeny/lowerbound.hpp"
#include "dpkemeny/oracle.hpp"
#include "dpkemeny/profile_io.hpp"
#include "dpkemeny/ranking.hpp"
#include "dpkemeny/rng.hpp"
#include "dpkemeny/sampling.hpp"
