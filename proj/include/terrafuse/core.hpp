#pragma once

#include "terrafuse/core/components.hpp"
#include "terrafuse/core/error.hpp"
#include "terrafuse/core/io.hpp"
#include "terrafuse/core/point_cloud.hpp"
#include "terrafuse/core/rigid_transform.hpp"
#include "terrafuse/core/spatial_index.hpp"
#include "terrafuse/core/transform.hpp"
#include "terrafuse/core/voxel.hpp"
