package org.elasticsearch.index.mapper;

public class FieldMapper extends Mapper {
    private String fieldType;

    public final String fieldType() {
        return fieldType;
    }
}
