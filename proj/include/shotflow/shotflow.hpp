#pragma once

#include "shotflow/allocator.hpp"
#include "shotflow/behavior.hpp"
#include "shotflow/cli.hpp"
#include "shotflow/config.hpp"
#include "shotflow/errors.hpp"
#include "shotflow/ingest.hpp"
#include "shotflow/lineups.hpp"
#include "shotflow/serialize.hpp"
#include "shotflow/strategies.hpp"
