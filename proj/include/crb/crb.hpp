// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include "crb/barrier.hpp"
#include "crb/beamform_individual.hpp"
#include "crb/beamform_total.hpp"
#include "crb/beamformer.hpp"
#include "crb/channel.hpp"
#include "crb/channel_io.hpp"
#include "crb/error.hpp"
#include "crb/harness.hpp"
#include "crb/linalg.hpp"
#include "crb/oracle.hpp"
#include "crb/rng.hpp"
