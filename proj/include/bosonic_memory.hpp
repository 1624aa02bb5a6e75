// Copyright 2026 The bosonic-memory Authors
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

#include "bosonic_memory/thermal_entropy.hpp"
#include "bosonic_memory/gaussian.hpp"
#include "bosonic_memory/spectral.hpp"
#include "bosonic_memory/channel.hpp"
#include "bosonic_memory/capacity.hpp"
#include "bosonic_memory/random_inputs.hpp"
#include "bosonic_memory/fock.hpp"
#include "bosonic_memory/batch.hpp"
