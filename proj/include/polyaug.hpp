// Copyright 2026 The polyaug Authors
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

#ifndef POLYAUG_POLYAUG_HPP
#define POLYAUG_POLYAUG_HPP

#include "polyaug/error.hpp"
#include "polyaug/geometry.hpp"
#include "polyaug/image_io.hpp"
#include "polyaug/label_io.hpp"
#include "polyaug/pipeline.hpp"
#include "polyaug/raster.hpp"
#include "polyaug/transforms.hpp"

#endif  // POLYAUG_POLYAUG_HPP
