#pragma once

// Umbrella header: cubic-matrix algebra under the t-product, the coupled
// slice-wise product and their composite, with spectral tools, dynamic
// systems and the Z_m evolutionary game on hyper-networks.

#include "tcube/analysis.hpp"
#include "tcube/cubic.hpp"
#include "tcube/dense.hpp"
#include "tcube/domain.hpp"
#include "tcube/eigen.hpp"
#include "tcube/error.hpp"
#include "tcube/gamma.hpp"
#include "tcube/hypernet.hpp"
#include "tcube/io.hpp"
#include "tcube/log.hpp"
#include "tcube/products.hpp"
#include "tcube/psi.hpp"
#include "tcube/series.hpp"
#include "tcube/snf.hpp"
#include "tcube/solve.hpp"
#include "tcube/systems.hpp"
