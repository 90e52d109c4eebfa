/*
 * Copyright (c) 2026 The netsense Authors
 *
 * Licensed under the Apache License Version 2.0 with LLVM Exceptions
 * (the "License"); you may not use this file except in compliance with
 * the License. You may obtain a copy of the License at
 *
 *   https://llvm.org/LICENSE.txt
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <netsense/analytics.hpp>
#include <netsense/bench.hpp>
#include <netsense/dataset.hpp>
#include <netsense/exec/scheduler.hpp>
#include <netsense/exec/sender.hpp>
#include <netsense/matrix_io.hpp>
#include <netsense/partition.hpp>
#include <netsense/traffic_matrix.hpp>
