"""Exception types shared across the reconstruction pipeline."""


class PipelineError(Exception):
    """Base class for reconstruction failures."""


class EmptyDrawingError(PipelineError):
    """A view image thresholded to nothing, or contained no usable contour."""


class DegenerateContourError(PipelineError):
    """A contour was too small or too thin for the requested measurement."""


class AssemblyError(PipelineError):
    """Three-view assembly could not produce a consistent solid."""


class AssemblyMismatchError(AssemblyError):
    """The outermost contours of the three views disagree with each other."""


class MissingDepthError(AssemblyError):
    """A shape had no counterpart in the side or top view to supply depth."""


class RenderError(PipelineError):
    """A synthetic model could not be drawn onto the requested canvas."""


class EmptyCloudError(PipelineError):
    """Surface sampling produced no points within tolerance."""
