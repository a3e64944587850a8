#pragma once

#include "amfst/block_matching.hpp"
#include "amfst/calibration.hpp"
#include "amfst/consistency.hpp"
#include "amfst/core.hpp"
#include "amfst/flow_backend.hpp"
#include "amfst/image_io.hpp"
#include "amfst/io_formats.hpp"
#include "amfst/metrics.hpp"
#include "amfst/occlusion_init.hpp"
#include "amfst/oracle_backend.hpp"
#include "amfst/selection.hpp"
#include "amfst/synth.hpp"
#include "amfst/tracker.hpp"
#include "amfst/tracker_amfst.hpp"
#include "amfst/tracker_mfst.hpp"
#include "amfst/pipeline.hpp"
