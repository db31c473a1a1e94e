"""Dominant color pixel values by channelized binning."""
from .binning import BinningConfig, assign_bins, channelized_binning, compute_rho, segment_runs, WorkingSet
from .channels import ChannelHistogram, histogram_from_values, sorted_values, split_channels
from .evaluation import ErrorReport, epsilon, image_epsilon, match_pairs
from .gla import ComparisonRecord, GlaConfig, compare_methods, lloyd_quantize
from .image_io import CompositionSpec, RgbImage, Stripe, decode_image, generate_stripes, read_image, render_swatch, write_ppm
from .merge import MergeConfig, consolidate_humps, finalize_report, merge_bins
from .model import ChannelId, ColorBin, DominantColor
from .pipeline import ChannelReport, ExtractionConfig, extract_dominant_colors

__version__ = "0.1.0"
