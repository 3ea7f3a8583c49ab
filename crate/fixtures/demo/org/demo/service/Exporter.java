package org.demo.service;

import org.demo.model.Graph;

public interface Exporter {
    String format();

    String export(Graph graph);

    boolean supports(Graph graph, String option);
}
