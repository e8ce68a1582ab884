"""Region based dense stereo matching for rectified color pairs."""
from .depth import (CameraRig, PointCloud, depth_from_disparity, export_ply, median_filter,
                    project_xyz)
from .energy import INVALID, MatchWindow, box_smooth, compute_energy_volume, smooth_volume
from .evaluation import (CANONICAL_CONFIGS, BenchConfig, BenchRecord, bad_pixel_rate,
                         run_benchmark)
from .global_match import NE, global_match, wta_select
from .imageio import ImageFormatError, load_gray, load_stereo_pair, save_gray, save_ppm
from .linegrow import GrowConfig, PointStatus, line_grow_match, segment_lengths
from .reliability_filter import (MonotonicityError, NoEstimatesError, ReliabilityReport,
                          filter_unreliable, map_energy, reliability, verify_monotonicity)

__version__ = "0.1.0"
