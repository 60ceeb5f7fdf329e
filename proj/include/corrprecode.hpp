// SPDX-License-Identifier: Apache-2.0
//
// corrprecode: statistics-adapted limited-feedback precoding for correlated MIMO channels
// Copyright (C) 2026 The corrprecode authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CORRPRECODE_HPP
#define CORRPRECODE_HPP

#include "corrprecode/matrix.hpp"
#include "corrprecode/subspace.hpp"
#include "corrprecode/numerics.hpp"
#include "corrprecode/channel.hpp"
#include "corrprecode/grassmann.hpp"
#include "corrprecode/linkperf.hpp"
#include "corrprecode/codebook.hpp"
#include "corrprecode/harness.hpp"

#endif
