// Copyright 2026 The dl-harmonics Authors
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

#pragma once

#include "dlh/errors.hpp"
#include "dlh/rational.hpp"
#include "dlh/tree.hpp"
#include "dlh/dl_graph.hpp"
#include "dlh/lamplighter.hpp"
#include "dlh/walks.hpp"
#include "dlh/simulate.hpp"
#include "dlh/kernels.hpp"
#include "dlh/linalg.hpp"
#include "dlh/io.hpp"
#include "dlh/dirichlet.hpp"
