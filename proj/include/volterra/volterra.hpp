#pragma once

#include "volterra/canonical.hpp"
#include "volterra/config.hpp"
#include "volterra/diagnostics.hpp"
#include "volterra/engine.hpp"
#include "volterra/errors.hpp"
#include "volterra/forcing.hpp"
#include "volterra/io.hpp"
#include "volterra/pathwise.hpp"
#include "volterra/seqcore.hpp"
#include "volterra/theorems.hpp"
