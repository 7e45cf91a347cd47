"""Exception hierarchy shared by every stage of the pipeline."""


class DeepLinkError(Exception):
    """Base class for all errors raised by deeplinkgen."""


# app model / driver

class MalformedSpec(DeepLinkError, ValueError):
    pass


class DanglingReference(MalformedSpec):
    pass


class MissingMain(MalformedSpec):
    pass


class UnknownOperation(DeepLinkError, LookupError):
    pass


class NoHandler(DeepLinkError, LookupError):
    pass


class AmbiguousInstance(DeepLinkError):
    pass


# exploration / shortcuts

class MalformedGraph(DeepLinkError, ValueError):
    pass


class EndpointMismatch(DeepLinkError, ValueError):
    pass


# crawling / synthesis

class PathReplayFailed(DeepLinkError):
    pass


class RecoveryDiverged(DeepLinkError):
    pass


class EmptyPath(DeepLinkError, ValueError):
    pass


class UnboundLabel(DeepLinkError):
    def __init__(self, label, path=None):
        super().__init__(f"no value for label {label!r} in the original path")
        self.label = label
        self.path = path


# repository / execution

class CorruptStore(DeepLinkError):
    def __init__(self, location, line_no, reason):
        super().__init__(f"{location}:{line_no}: {reason}")
        self.location = location
        self.line_no = line_no


class BindFailure(DeepLinkError, OSError):
    pass


class UnknownActivity(DeepLinkError, LookupError):
    pass


class MalformedUrl(DeepLinkError, ValueError):
    pass


class NotFound(DeepLinkError, LookupError):
    pass


class TargetMismatch(DeepLinkError):
    pass
