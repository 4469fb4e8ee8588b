// Copyright 2026 The csauc Authors
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

#pragma once

#include "csauc/bench.hpp"
#include "csauc/bucketing.hpp"
#include "csauc/csauc_dp.hpp"
#include "csauc/evaluate.hpp"
#include "csauc/generator.hpp"
#include "csauc/grouping.hpp"
#include "csauc/ingest.hpp"
#include "csauc/metrics.hpp"
#include "csauc/model.hpp"
#include "csauc/oracle.hpp"
#include "csauc/report.hpp"
