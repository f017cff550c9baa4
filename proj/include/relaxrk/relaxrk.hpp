#pragma once

#include "relaxrk/boundary.hpp"
#include "relaxrk/coupling.hpp"
#include "relaxrk/errors.hpp"
#include "relaxrk/experiment.hpp"
#include "relaxrk/grid.hpp"
#include "relaxrk/imex.hpp"
#include "relaxrk/initial_data.hpp"
#include "relaxrk/model.hpp"
#include "relaxrk/models.hpp"
#include "relaxrk/norms.hpp"
#include "relaxrk/reconstruct.hpp"
#include "relaxrk/spatial.hpp"
#include "relaxrk/tableau.hpp"
#include "relaxrk/tableau_io.hpp"
