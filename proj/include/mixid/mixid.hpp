#pragma once

// Everything except the command-line layer (mixid/cli.hpp), which needs the
// vendored JSON header.

#include "mixid/field.hpp"
#include "mixid/group_spec.hpp"
#include "mixid/matrix.hpp"
#include "mixid/semilinear.hpp"
#include "mixid/matgrp.hpp"
#include "mixid/perm.hpp"
#include "mixid/words.hpp"
#include "mixid/catalog.hpp"
#include "mixid/certify.hpp"
#include "mixid/polyring.hpp"
#include "mixid/search.hpp"
