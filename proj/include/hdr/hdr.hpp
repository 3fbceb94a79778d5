// SPDX-License-Identifier: Apache-2.0
//
// hdr-ris: tensor-based channel estimation for RIS-assisted MIMO links
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

#ifndef HDR_HDR_HPP
#define HDR_HDR_HPP

#include "hdr/linalg.hpp"
#include "hdr/tensor.hpp"
#include "hdr/hosvd.hpp"
#include "hdr/channel.hpp"
#include "hdr/training.hpp"
#include "hdr/permutation.hpp"
#include "hdr/estimators.hpp"
#include "hdr/metrics.hpp"
#include "hdr/experiment.hpp"

#endif // HDR_HDR_HPP
