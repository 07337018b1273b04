// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "smor/core/rom.hpp"
#include "smor/core/snapshot_io.hpp"

#include <filesystem>

namespace smor {

io::Container to_container(const ReducedModel& model);
ReducedModel from_container(const io::Container& c);

void save_model(const ReducedModel& model, const std::filesystem::path& path);
ReducedModel load_model(const std::filesystem::path& path);

}  // namespace smor
