// Copyright 2026 The fairstop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSTOP_FAIRSTOP_HPP_
#define FAIRSTOP_FAIRSTOP_HPP_

#include "fairstop/audit.hpp"
#include "fairstop/distribution.hpp"
#include "fairstop/fair_lp.hpp"
#include "fairstop/gen.hpp"
#include "fairstop/instance.hpp"
#include "fairstop/json_io.hpp"
#include "fairstop/linear_program.hpp"
#include "fairstop/oracle.hpp"
#include "fairstop/parallel.hpp"
#include "fairstop/rules.hpp"

#endif  // FAIRSTOP_FAIRSTOP_HPP_
