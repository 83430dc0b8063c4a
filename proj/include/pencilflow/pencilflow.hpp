#pragma once

#include "pencilflow/error.hpp"
#include "pencilflow/etf.hpp"
#include "pencilflow/process.hpp"
#include "pencilflow/random.hpp"
#include "pencilflow/raster.hpp"
#include "pencilflow/renderer.hpp"
#include "pencilflow/settings.hpp"
#include "pencilflow/stroke_model.hpp"
