#pragma once

#include "pgraph/catalog.hpp"
#include "pgraph/csv.hpp"
#include "pgraph/floquet.hpp"
#include "pgraph/graph.hpp"
#include "pgraph/graph_io.hpp"
#include "pgraph/hermitian_eig.hpp"
#include "pgraph/nelder_mead.hpp"
#include "pgraph/parallel.hpp"
#include "pgraph/spectral_analysis.hpp"
