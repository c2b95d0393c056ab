// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0

#ifndef NETRED_NETRED_HPP
#define NETRED_NETRED_HPP

#include "netred/types.hpp"
#include "netred/graph.hpp"
#include "netred/linsys.hpp"
#include "netred/network.hpp"
#include "netred/cluster.hpp"
#include "netred/tree.hpp"
#include "netred/weights.hpp"
#include "netred/subsystem.hpp"

#endif  // NETRED_NETRED_HPP
