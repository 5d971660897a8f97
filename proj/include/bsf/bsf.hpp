/*
 *   Copyright 2026 The BSF Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "bsf/calib.hpp"
#include "bsf/core.hpp"
#include "bsf/cost_model.hpp"
#include "bsf/error.hpp"
#include "bsf/executor.hpp"
#include "bsf/io/csv.hpp"
#include "bsf/io/param_file.hpp"
#include "bsf/io/svg_chart.hpp"
#include "bsf/io/worker_list.hpp"
#include "bsf/problems/gravity.hpp"
#include "bsf/problems/jacobi.hpp"
#include "bsf/problems/synthetic.hpp"
#include "bsf/sim.hpp"
