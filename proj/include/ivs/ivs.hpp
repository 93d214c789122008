#pragma once

#include "ivs/cli.hpp"
#include "ivs/conserved.hpp"
#include "ivs/core.hpp"
#include "ivs/elliptic.hpp"
#include "ivs/errors.hpp"
#include "ivs/groups.hpp"
#include "ivs/newton.hpp"
#include "ivs/params.hpp"
#include "ivs/schemes.hpp"
