#ifndef TCMAP_TCMAP_HPP
#define TCMAP_TCMAP_HPP

#include "tcmap/types.hpp"
#include "tcmap/error.hpp"
#include "tcmap/spectral.hpp"
#include "tcmap/elliptic.hpp"
#include "tcmap/domain_geometry.hpp"
#include "tcmap/domain_io.hpp"
#include "tcmap/szego_ahlfors.hpp"
#include "tcmap/representative_domain.hpp"
#include "tcmap/mapping_pipeline.hpp"
#include "tcmap/kernels.hpp"
#include "tcmap/report.hpp"
#include "tcmap/acceptance.hpp"

#endif  // TCMAP_TCMAP_HPP
