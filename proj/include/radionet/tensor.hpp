// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "radionet/core/conv.hpp"
#include "radionet/core/errors.hpp"
#include "radionet/core/gradcheck.hpp"
#include "radionet/core/ops.hpp"
#include "radionet/core/rng.hpp"
#include "radionet/core/tensor.hpp"
