"""
Theme configuration for qva-transfer text output.
"""


class QvaTheme:
    """Theme configuration for qva-transfer output."""

    # Feature flags
    USE_EMOJI = True
    USE_COLORS = False

    # Outcome indicators
    STATUS = {
        'improved': '📈',
        'degraded': '📉',
        'unchanged': '➖',
        'warning': '⚠️',
        'unknown': '❓',
    }

    # Artifact type indicators
    RESOURCES = {
        'dataset': '🌙',
        'model': '🧮',
        'report': '📋',
        'curve': '📈',
        'comparison': '⚖️',
    }

    # Section and grouping indicators
    SECTIONS = {
        'details': '📝',
        'residue': '🧩',
        'transitions': '🔀',
    }

    @classmethod
    def get_status_emoji(cls, status: str) -> str:
        """Get emoji for a status value with fallback."""
        if not cls.USE_EMOJI:
            return ''
        return cls.STATUS.get(status.lower(), cls.STATUS['unknown'])

    @classmethod
    def get_resource_emoji(cls, resource: str) -> str:
        """Get emoji for an artifact type with fallback."""
        if not cls.USE_EMOJI:
            return ''
        return cls.RESOURCES.get(resource.lower(), '📦')

    @classmethod
    def get_section_emoji(cls, section: str) -> str:
        if not cls.USE_EMOJI:
            return ''
        return cls.SECTIONS.get(section.lower(), cls.SECTIONS['details'])
